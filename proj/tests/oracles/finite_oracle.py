#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Brute-force oracle for the finite presheaf values frozen in golden.json.

Sites are built from concrete models (monotone maps between finite
ordinals, or explicit parallel arrows), presheaves from their definitions,
and every count by exhaustive enumeration with naturality checked directly.
Nothing here reuses the library.

    finite_oracle.py              print the golden document
    finite_oracle.py --check F    exit 1 when F differs from a fresh run
"""

import argparse
import itertools
import json
import sys


class Site:
    def __init__(self, objects, morphisms, compose, identity):
        self.objects = objects          # names
        self.morphisms = morphisms      # list of (dom, cod, key)
        self._compose = compose         # (g, f) -> index of g.f or None
        self.identity = identity        # object -> morphism index

    def compose(self, g, f):
        return self._compose(g, f)

    def into(self, c):
        return [i for i, m in enumerate(self.morphisms) if m[1] == c]

    def hom(self, d, c):
        return [i for i, m in enumerate(self.morphisms) if m[0] == d and m[1] == c]


def monotone_site():
    """[0] = {0} and [1] = {0 < 1} with all monotone maps."""
    ords = {0: 1, 1: 2}
    morphisms = []
    for d, c in itertools.product(ords, ords):
        for table in itertools.product(range(ords[c]), repeat=ords[d]):
            if all(table[i] <= table[i + 1] for i in range(len(table) - 1)):
                morphisms.append((d, c, table))
    index = {m: i for i, m in enumerate(morphisms)}

    def compose(g, f):
        gd, gc, gt = morphisms[g]
        fd, fc, ft = morphisms[f]
        if fc != gd:
            return None
        return index[(fd, gc, tuple(gt[x] for x in ft))]

    identity = {c: index[(c, c, tuple(range(ords[c])))] for c in ords}
    return Site(["[0]", "[1]"], morphisms, compose, identity)


def parallel_site():
    """V, E and two arrows s, t : V -> E."""
    morphisms = [(0, 0, "idV"), (1, 1, "idE"), (0, 1, "s"), (0, 1, "t")]

    def compose(g, f):
        if morphisms[f][1] != morphisms[g][0]:
            return None
        if morphisms[g][2].startswith("id"):
            return f
        if morphisms[f][2].startswith("id"):
            return g
        return None

    return Site(["V", "E"], morphisms, compose, {0: 0, 1: 1})


def point_site():
    return Site(["*"], [(0, 0, "id")], lambda g, f: 0, {0: 0})


class Presheaf:
    """sizes[c]; act[f][x] for x in X(cod f) lands in X(dom f)."""

    def __init__(self, site, sizes, act):
        self.site = site
        self.sizes = sizes
        self.act = act

    def elements(self):
        return [(c, x) for c in range(len(self.sizes)) for x in range(self.sizes[c])]


def yoneda(site, c):
    stages = [site.hom(d, c) for d in range(len(site.objects))]
    pos = {f: (d, i) for d, fs in enumerate(stages) for i, f in enumerate(fs)}
    act = []
    for f, (d, cod, _) in enumerate(site.morphisms):
        act.append([pos[site.compose(g, f)][1] for g in stages[cod]])
    return Presheaf(site, [len(s) for s in stages], act)


def constant(site, n):
    return Presheaf(site, [n] * len(site.objects), [list(range(n)) for _ in site.morphisms])


def product(x, y):
    site = x.site
    sizes = [x.sizes[c] * y.sizes[c] for c in range(len(site.objects))]
    act = []
    for f, (d, c, _) in enumerate(site.morphisms):
        act.append([x.act[f][a] * y.sizes[d] + y.act[f][b]
                    for a in range(x.sizes[c]) for b in range(y.sizes[c])])
    return Presheaf(site, sizes, act)


def sieves(site, c):
    into = site.into(c)
    out = []
    for r in range(len(into) + 1):
        for s in itertools.combinations(into, r):
            ss = set(s)
            if all(site.compose(f, g) in ss
                   for f in ss for g in range(len(site.morphisms))
                   if site.morphisms[g][1] == site.morphisms[f][0]):
                out.append(frozenset(ss))
    return out


def omega(site):
    stages = [sieves(site, c) for c in range(len(site.objects))]
    index = [{s: i for i, s in enumerate(st)} for st in stages]
    act = []
    for f, (d, c, _) in enumerate(site.morphisms):
        row = []
        for s in stages[c]:
            pulled = frozenset(g for g in site.into(d) if site.compose(f, g) in s)
            row.append(index[d][pulled])
        act.append(row)
    return Presheaf(site, [len(s) for s in stages], act), stages


def natural_maps(x, y, limit=None):
    """Every natural map x -> y as a tuple of per-element values."""
    site = x.site
    elems = x.elements()
    slot = {e: i for i, e in enumerate(elems)}
    # constraints checked once both ends are assigned
    checks = [[] for _ in elems]
    for f, (d, c, _) in enumerate(site.morphisms):
        for a in range(x.sizes[c]):
            i, j = slot[(c, a)], slot[(d, x.act[f][a])]
            checks[max(i, j)].append((i, j, f))
    value = [0] * len(elems)
    out = []

    def go(k):
        if limit is not None and len(out) >= limit:
            return
        if k == len(elems):
            out.append(tuple(value))
            return
        c = elems[k][0]
        for v in range(y.sizes[c]):
            value[k] = v
            if all(y.act[f][value[i]] == value[j] for i, j, f in checks[k]):
                go(k + 1)

    go(0)
    return out


def components(x):
    """Connected components of the category of elements, by union-find."""
    elems = x.elements()
    parent = {e: e for e in elems}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for f, (d, c, _) in enumerate(x.site.morphisms):
        for a in range(x.sizes[c]):
            ra, rb = find((c, a)), find((d, x.act[f][a]))
            if ra != rb:
                parent[ra] = rb
    return len({find(e) for e in elems})


def map_classes(x, y, interval, ends):
    """Components of Hom(x, y) under the relation generated by maps
    interval*x -> y restricting to f at ends[0] and g at ends[1]."""
    homs = natural_maps(x, y)
    idx = {h: i for i, h in enumerate(homs)}
    ix = product(interval, x)
    parent = list(range(len(homs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    offs_ix = [sum(ix.sizes[:c]) for c in range(len(ix.sizes))]
    for h in natural_maps(ix, y):
        restricted = []
        for e in ends:
            row = []
            for c in range(len(x.sizes)):
                for a in range(x.sizes[c]):
                    row.append(h[offs_ix[c] + e[c] * x.sizes[c] + a])
            restricted.append(tuple(row))
        a, b = find(idx[restricted[0]]), find(idx[restricted[1]])
        if a != b:
            parent[a] = b
    return len({find(i) for i in range(len(homs))}), len(homs)


def global_points(x):
    one = constant(x.site, 1)
    return [tuple(p) for p in natural_maps(one, x)]


def negation(site, stages):
    """neg S = {f : f*S empty} on each stage, as index tables."""
    out = []
    for c, st in enumerate(stages):
        index = {s: i for i, s in enumerate(st)}
        row = []
        for s in st:
            neg = frozenset(f for f in site.into(c)
                            if not any(site.compose(f, g) in s for g in site.into(site.morphisms[f][0])))
            row.append(index[neg])
        out.append(row)
    return out


def topologies(om, stages):
    site = om.site
    tops = [len(st) - 1 for st in stages]  # the maximal sieve sorts last
    top_sets = [st[-1] for st in stages]
    found = []
    for j in natural_maps(om, om):
        offs = [sum(om.sizes[:c]) for c in range(len(om.sizes))]

        def jj(c, s):
            return j[offs[c] + s]

        ok = True
        for c, st in enumerate(stages):
            if st[jj(c, tops[c])] != top_sets[c]:
                ok = False
            for a in range(len(st)):
                if jj(c, jj(c, a)) != jj(c, a):
                    ok = False
                for b in range(len(st)):
                    meet = st.index(st[a] & st[b])
                    if st[jj(c, meet)] != st[jj(c, a)] & st[jj(c, b)]:
                        ok = False
        if ok:
            found.append(j)
    return found


def run():
    doc = {}

    d1 = monotone_site()
    om, stages = omega(d1)
    one = constant(d1, 1)
    two = constant(d1, 2)
    interval = yoneda(d1, 1)
    pts_i = global_points(interval)
    doc["delta1"] = {
        "morphisms": len(d1.morphisms),
        "omega_sizes": om.sizes,
        "omega_points": len(global_points(om)),
        "omega_components": components(om),
        "interval_sizes": interval.sizes,
        "interval_square_components": components(product(interval, interval)),
        "hom_I_I": len(natural_maps(interval, interval)),
        "hom_1_Omega": len(natural_maps(one, om)),
        "hom_I_Omega": len(natural_maps(interval, om)),
        "hom_Omega_Omega": len(natural_maps(om, om)),
        "exp_I_I_sizes": [len(natural_maps(product(yoneda(d1, c), interval), interval))
                          for c in range(2)],
        "topologies": len(topologies(om, stages)),
    }
    neg = negation(d1, stages)
    doc["delta1"]["notnot"] = [[neg[c][neg[c][s]] for s in range(len(stages[c]))] for c in range(2)]
    doc["delta1"]["omega_stage1_sieve_sizes"] = [len(s) for s in stages[1]]

    classes = {}
    objs = {"1": one, "2": two, "I": interval}
    for xn, yn in itertools.product(objs, objs):
        k, n = map_classes(objs[xn], objs[yn], interval, pts_i)
        classes[xn + "," + yn] = [k, n]
    for xn in ("1", "I"):
        k, n = map_classes(objs[xn], om, interval, pts_i)
        classes[xn + ",Omega"] = [k, n]
    doc["delta1"]["homotopy_classes"] = classes

    pp = parallel_site()
    ipp = yoneda(pp, 1)
    ompp, _ = omega(pp)
    doc["parallel_pair"] = {
        "omega_sizes": ompp.sizes,
        "interval_square_components": components(product(ipp, ipp)),
        "representable_vertex_points": len(global_points(yoneda(pp, 0))),
    }

    pt = point_site()
    ompt, stpt = omega(pt)
    doc["one"] = {
        "omega_sizes": ompt.sizes,
        "topologies": len(topologies(ompt, stpt)),
    }
    return doc


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--check", metavar="GOLDEN")
    args = ap.parse_args()
    doc = run()
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.check:
        with open(args.check) as f:
            want = f.read()
        if want != text:
            sys.stdout.write(text)
            print("golden file differs from a fresh oracle run", file=sys.stderr)
            return 1
        print("golden file matches")
        return 0
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
