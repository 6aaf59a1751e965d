"""Distinguished classes: restriction/forgetful pullbacks, psi and phi
classes, the delta classes spanning the Picard group of the singular space,
canonical and total-boundary divisors, and the published table of quartic
psi numbers.

Everything here is config-independent as an element of the polynomial ring on
the 65 boundary divisors; only evaluation (normal forms, integrals) needs a
quotient table.
"""

from __future__ import annotations

import csv
import itertools
from fractions import Fraction
from importlib import resources

from . import labels
from .chowring import (
    RingElement,
    VerificationError,
    apply_perm_element,
    integrate,
    is_zero_in,
    m36_subring_membership,
    normal_form,
    restrict_to_fiber,
)

LINESET = set(labels.LINES)


def _check_pair(ij):
    i, j = ij
    if i == j or not {i, j} <= LINESET:
        raise ValueError("not a pair of distinct lines: %r" % (ij,))
    return (min(i, j), max(i, j))


def pullback_f(k, ij):
    """Pullback of the four-point boundary divisor D_ij along the map that
    forgets the line k (restriction to the line i of the pencil basepoint
    configuration).  k must not lie in ij."""
    i, j = _check_pair(ij)
    if k not in LINESET or k in (i, j):
        raise ValueError("forgotten line %r must avoid the pair %r" % (k, ij))
    l, m, n = sorted(LINESET - {i, j, k})
    out = RingElement.from_divisors([
        labels.triple((i, j, k)),
        labels.pair((i, j)),
        labels.cyclic((i, j), (k, l), (m, n)),
        labels.cyclic((i, j), (k, m), (l, n)),
        labels.cyclic((i, j), (k, n), (l, m)),
    ])
    return out


def pullback_r(k, ij):
    """Pullback of D_ij along the restriction to the line k (the five
    remaining lines cut four points plus the polar point on k)."""
    i, j = _check_pair(ij)
    if k not in LINESET or k in (i, j):
        raise ValueError("restriction line %r must avoid the pair %r" % (k, ij))
    l, m, n = sorted(LINESET - {i, j, k})
    out = RingElement.from_divisors([
        labels.triple((l, m, n)),
        labels.pair((i, j)),
        labels.cyclic((k, l), (i, j), (m, n)),
        labels.cyclic((k, m), (i, j), (l, n)),
        labels.cyclic((k, n), (i, j), (l, m)),
    ])
    return out


# --------------------------------------------------------------------------
# psi and phi


def psi(i, j, n=None, k=None):
    """The cotangent class of the marked point cut by line j on line i.

    Any admissible (n, k) gives the same class modulo relations; the default
    takes n largest outside {i, j} and k smallest among the rest, which is
    the representative used everywhere else in this package."""
    if i == j or not {i, j} <= LINESET:
        raise ValueError("psi needs two distinct lines, got %r, %r" % (i, j))
    rest = sorted(LINESET - {i, j})
    if n is None:
        n = rest[-1]
    if n not in rest:
        raise ValueError("auxiliary line %r must avoid %r and %r" % (n, i, j))
    remaining = [x for x in rest if x != n]
    if k is None:
        k = remaining[0]
    if k not in remaining:
        raise ValueError("splitting line %r must avoid %r, %r, %r" % (k, i, j, n))
    l, m = [x for x in remaining if x != k]
    return (
        pullback_f(n, (j, k))
        + pullback_f(n, (l, m))
        + pullback_r(i, (j, n))
    )


def psi_choices(i, j):
    """All twelve representatives of psi(i, j); they agree in every quotient."""
    rest = sorted(LINESET - {i, j})
    for n in rest:
        for k in [x for x in rest if x != n]:
            yield psi(i, j, n=n, k=k)


def phi(i, j):
    """The symmetrized class psi(i, j) + psi(j, i)."""
    return psi(i, j) + psi(j, i)


# --------------------------------------------------------------------------
# delta classes


def delta_triple(ijk):
    """delta for a triple split: equal to the corresponding boundary divisor."""
    t = tuple(sorted(ijk))
    return RingElement.from_divisor(labels.triple(t))


def delta_pair(ij):
    """delta for the pair ij: the pair divisor plus the three cyclic
    divisors whose middle pair is ij, labeled by the smallest complement
    line."""
    i, j = _check_pair(ij)
    k, l, m, n = sorted(LINESET - {i, j})
    return RingElement.from_divisors([
        labels.pair((i, j)),
        labels.cyclic((k, l), (i, j), (m, n)),
        labels.cyclic((k, m), (i, j), (l, n)),
        labels.cyclic((k, n), (i, j), (l, m)),
    ])


def delta_cyclic(pairs):
    """delta for a cyclic split (ij, kl, mn): the difference of the two
    orientations of the matching.  The label must put the smallest line of
    the complement of ij in the second pair; the three valid labels of one
    matching give the same class up to sign."""
    if len(pairs) != 3:
        raise ValueError("cyclic delta needs three pairs, got %r" % (pairs,))
    ps = [tuple(sorted(p)) for p in pairs]
    flat = [x for p in ps for x in p]
    if sorted(flat) != list(labels.LINES):
        raise ValueError("pairs %r do not partition the six lines" % (pairs,))
    smallest_rest = min(x for x in flat if x not in ps[0])
    if smallest_rest not in ps[1]:
        raise ValueError(
            "cyclic delta label must continue with the pair containing %d"
            % smallest_rest
        )
    fwd = labels.cyclic(ps[0], ps[1], ps[2])
    return RingElement.from_divisor(fwd) - RingElement.from_divisor(
        labels.cyclic_partner(fwd)
    )


PICARD_TRIPLES = ((1, 5, 6), (2, 5, 6), (3, 4, 5), (3, 4, 6), (3, 5, 6), (4, 5, 6))


def _cyclic_label_of_matching(matching):
    """The convention-respecting (ij, kl, mn) ordering of a matching."""
    ps = sorted(tuple(sorted(p)) for p in matching)
    first = next(p for p in ps if 1 in p)
    rest = [p for p in ps if p != first]
    smallest = min(x for p in rest for x in p)
    second = next(p for p in rest if smallest in p)
    third = next(p for p in rest if p != second)
    return (first, second, third)


def picard_m36_basis(t):
    """The 36 delta classes spanning the Picard group of the singular space:
    six triple deltas, all fifteen pair deltas, all fifteen cyclic deltas.
    Every element is checked to descend, and the image in degree 1 of the
    resolution is checked to have rank exactly 36."""
    from .exactla import SparseIntegerMatrix, rank_over_rationals

    out = [delta_triple(tr) for tr in PICARD_TRIPLES]
    out.extend(delta_pair(p) for p in itertools.combinations(labels.LINES, 2))
    out.extend(
        delta_cyclic(_cyclic_label_of_matching(pt.matching))
        for pt in labels.SINGULAR_POINTS
    )
    for e in out:
        if not m36_subring_membership(e, t):
            raise VerificationError(
                "a delta class failed the descent test: %r" % (e,)
            )
    basis = t.basis_monomials(1)
    pos = {mono: i for i, mono in enumerate(basis)}
    rows = []
    for e in out:
        nf = normal_form(e, t)
        rows.append({pos[m]: c for m, c in nf.coeffs.items()})
    r = rank_over_rationals(SparseIntegerMatrix.from_dicts(len(basis), rows))
    if r != 36:
        raise VerificationError("delta classes have rank %d, expected 36" % r)
    return out


# --------------------------------------------------------------------------
# canonical classes


K_COEFFS = {
    labels.TRIPLE: Fraction(-3, 10),
    labels.PAIR: Fraction(-1, 5),
    labels.CYCLIC: Fraction(1, 5),
}

KB_COEFFS = {
    labels.TRIPLE: Fraction(7, 10),
    labels.PAIR: Fraction(4, 5),
    labels.CYCLIC: Fraction(6, 5),
}


def canonical_divisor():
    return RingElement(
        {(labels.divisor_index(d),): K_COEFFS[d.kind] for d in labels.DIVISORS}
    )


def total_boundary():
    return RingElement({(labels.divisor_index(d),): 1 for d in labels.DIVISORS})


def _crepant_correction(duplicated_cyclics):
    """The correction divisor in the pullback identity for K: triples inside
    {1,2,3,4}, each pair of {1,2,3,4} with its complementary pair both as a
    pair divisor and as a cyclic with (5,6), the pair divisor of (5,6), and
    the cyclic divisors (either all thirty once, or additionally repeating
    the six whose matching contains (5,6))."""
    terms = RingElement.zero()
    for tr in itertools.combinations((1, 2, 3, 4), 3):
        terms = terms + RingElement.from_divisor(labels.triple(tr))
    for ij in itertools.combinations((1, 2, 3, 4), 2):
        kl = tuple(sorted({1, 2, 3, 4} - set(ij)))
        terms = terms + RingElement.from_divisor(labels.pair(ij))
        terms = terms + RingElement.from_divisor(labels.cyclic(ij, kl, (5, 6)))
    terms = terms + RingElement.from_divisor(labels.pair((5, 6)))
    for d in labels.DIVISORS:
        if d.kind != labels.CYCLIC:
            continue
        if not duplicated_cyclics and (5, 6) in labels.matching_of_cyclic(d).matching:
            continue
        terms = terms + RingElement.from_divisor(d)
    return terms


def _pullback_identity_residues(t):
    """Normal forms of K minus each reading of the pullback identity
    -(1/2)(r6* + r5*)(total four-point boundary) + correction."""
    k_class = canonical_divisor()
    half = Fraction(1, 2)
    pulled = RingElement.zero()
    for a, b in itertools.combinations((1, 2, 3, 4, 5), 2):
        pulled = pulled + pullback_r(6, (a, b))
    for a, b in itertools.combinations((1, 2, 3, 4, 6), 2):
        pulled = pulled + pullback_r(5, (a, b))
    residues = {}
    for reading, dup in (("cyclics-once", False), ("cyclics-repeated", True)):
        candidate = pulled.scale(-half) + _crepant_correction(dup)
        residues[reading] = normal_form(k_class - candidate, t)
    return residues


def canonical_classes(t):
    """K, the total boundary B, and K+B, with the three verifications that
    pin them down: the pullback identity for K holds (in at least one of the
    two readings of the correction term), K+B restricts to zero on every
    exceptional line, and (K+B)^4 is positive."""
    k_class = canonical_divisor()
    b_class = total_boundary()
    kb = k_class + b_class
    residues = _pullback_identity_residues(t)
    passing = sorted(r for r, res in residues.items() if res.is_zero())
    if not passing:
        raise VerificationError(
            "the pullback identity for K fails in both readings: %r"
            % {r: repr(res) for r, res in residues.items()}
        )
    bad_lines = [
        pt.name()
        for pt in labels.SINGULAR_POINTS
        if not restrict_to_fiber(kb, pt, t).is_zero()
    ]
    if bad_lines:
        raise VerificationError(
            "K+B does not vanish on exceptional lines %r" % (bad_lines,)
        )
    kb4 = integrate(kb ** 4, t)
    if kb4 <= 0:
        raise VerificationError("(K+B)^4 = %s is not positive" % (kb4,))
    return {
        "K": k_class,
        "B": b_class,
        "K_plus_B": kb,
        "identity_readings": passing,
        "kb4": kb4,
    }


# --------------------------------------------------------------------------
# micro curves


def curve_checks(t):
    """Intersection tables of the three boundary curves that pin down the
    signs in the pullback formulas.  Returns measured and expected values."""
    f12 = RingElement.from_divisor(labels.pair((1, 2)))
    f34 = RingElement.from_divisor(labels.pair((3, 4)))
    f56 = RingElement.from_divisor(labels.pair((5, 6)))
    e123 = RingElement.from_divisor(labels.triple((1, 2, 3)))
    e345 = RingElement.from_divisor(labels.triple((3, 4, 5)))
    e246 = RingElement.from_divisor(labels.triple((2, 4, 6)))
    g_12_34_56 = RingElement.from_divisor(labels.cyclic((1, 2), (3, 4), (5, 6)))
    g_12_35_46 = RingElement.from_divisor(labels.cyclic((1, 2), (3, 5), (4, 6)))
    r6_12 = pullback_r(6, (1, 2))

    curves = {
        "pair-chain": f12 * f34 * f56,
        "triple-chain": e123 * e345 * e246,
        "pair-cyclic": f12 * f56 * g_12_34_56,
    }
    probes = {
        "pair-chain": (
            ("F[12]", f12, -1),
            ("G[12,34,56]", g_12_34_56, 1),
            ("r6*F[12]", r6_12, 0),
        ),
        "triple-chain": (
            ("E[345]", e345, -1),
            ("G[12,35,46]", g_12_35_46, 1),
            ("r6*F[12]", r6_12, 0),
        ),
        "pair-cyclic": (
            ("F[12]", f12, 0),
            ("G[12,34,56]", g_12_34_56, -1),
            ("r6*F[12]", r6_12, -1),
        ),
    }
    report = {}
    for name, curve in curves.items():
        rows = []
        for label, probe, expected in probes[name]:
            got = integrate(curve * probe, t)
            rows.append({
                "against": label,
                "value": got,
                "expected": expected,
                "ok": got == expected,
            })
        report[name] = rows
    report["all_ok"] = all(r["ok"] for rows in (report[n] for n in curves) for r in rows)
    return report


# --------------------------------------------------------------------------
# quartic psi numbers


PSI_PAIRS = tuple(
    (i, j) for i in labels.LINES for j in labels.LINES if i != j
)


def _orbit_key(multiset):
    return tuple(sorted(multiset))


def psi_orbits():
    """Representatives of the relabeling orbits on degree-4 multisets of the
    thirty psi classes, in lexicographic order."""
    seen = set()
    orbits = []
    for ms in itertools.combinations_with_replacement(PSI_PAIRS, 4):
        key = _orbit_key(ms)
        if key in seen:
            continue
        orbit = set()
        for sigma in labels.all_permutations():
            img = _orbit_key(
                tuple((sigma[i - 1], sigma[j - 1]) for i, j in ms)
            )
            orbit.add(img)
        seen.update(orbit)
        orbits.append((key, len(orbit)))
    return orbits


def _format_orbit(key):
    return ".".join("%d%d" % p for p in key)


def _parse_orbit(text):
    return tuple(sorted((int(p[0]), int(p[1])) for p in text.split(".")))


def _orbit_min(key):
    return min(
        _orbit_key(tuple((sigma[i - 1], sigma[j - 1]) for i, j in key))
        for sigma in labels.all_permutations()
    )


def load_published_psi_table():
    """The published nonzero quartic psi numbers, keyed by the lex-smallest
    representative of each relabeling orbit."""
    data = resources.files("m36").joinpath("data/psi_table_published.csv")
    out = {}
    with data.open("r", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            key = _orbit_min(_parse_orbit(row["orbit_representative"]))
            if key in out:
                raise ValueError(
                    "published rows %r collide in one orbit"
                    % (row["orbit_representative"],)
                )
            out[key] = int(row["value"])
    return out


def _too_many_repeats(key):
    from collections import Counter

    firsts = Counter(i for i, _ in key)
    return max(firsts.values()) >= 3


def psi_table(t):
    """Every quartic psi number, one integration per relabeling orbit.

    Returns the computed orbit table along with the comparison against the
    published nonzero values and the check of the vanishing rule (a product
    vanishes exactly when three of the four first indices agree).
    Discrepancies are reported, never patched."""
    psis = {p: psi(*p) for p in PSI_PAIRS}
    published = load_published_psi_table()
    rows = []
    mismatches = []
    rule_violations = []
    for key, orbit_size in psi_orbits():
        prod = psis[key[0]] * psis[key[1]] * psis[key[2]] * psis[key[3]]
        value = integrate(prod, t)
        if value.denominator != 1:
            raise VerificationError(
                "psi number %s is not an integer: %s" % (_format_orbit(key), value)
            )
        value = int(value)
        rows.append({
            "orbit_representative": _format_orbit(key),
            "orbit_size": orbit_size,
            "value": value,
        })
        expected_zero = _too_many_repeats(key)
        if (value == 0) != expected_zero:
            rule_violations.append(_format_orbit(key))
        pub = published.get(key)
        if pub is None:
            if value != 0:
                mismatches.append({
                    "orbit": _format_orbit(key),
                    "computed": value,
                    "published": None,
                })
        elif pub != value:
            mismatches.append({
                "orbit": _format_orbit(key),
                "computed": value,
                "published": pub,
            })
    return {
        "rows": rows,
        "published_mismatches": mismatches,
        "vanishing_rule_violations": rule_violations,
        "orbit_count": len(rows),
        "monomial_count": sum(r["orbit_size"] for r in rows),
    }
