"""Deciding (weak) isomorphism of characteristic data, with witnesses.

A weak isomorphism is a stratified poset isomorphism ``f`` together with
``psi`` in GL(m, Z) such that ``psi(lambda(S)) == lambda'(f(S))`` for every
stratum. The search walks poset isomorphisms, pins ``psi`` down from the
rank-one lattices of codimension-one strata (each known up to sign), and
re-checks every stratum.
"""
from __future__ import annotations

import enum
import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Hashable

from . import _qq
from .chardata import CharData, require_valid
from .intlat import GeneratorSet, LatticeError, UnimodularMap, apply_unimodular, smith_invariants
from .stratposet import PosetIso, enumerate_isos, is_order_isomorphism

DEFAULT_MAX_SIGNS = 24

CONDITIONAL_NOTE = "conditional on the top-strata homotopy-equivalence hypothesis (not asserted)"


class Mode(enum.Enum):
    WEAK = "weak"
    STRICT = "strict"


class Status(enum.Enum):
    ISOMORPHIC = "isomorphic"
    NOT_ISOMORPHIC = "not_isomorphic"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class IsoWitness:
    poset_iso: PosetIso
    psi: UnimodularMap
    mode: Mode = Mode.WEAK

    def to_json(self) -> dict:
        return {
            "mode": self.mode.value,
            "poset_iso": [list(p) for p in self.poset_iso.pairs],
            "psi": [[str(x) for x in row] for row in self.psi.matrix],
        }


@dataclass(frozen=True)
class Verdict:
    status: Status
    witness: IsoWitness | None = None
    detail: str = ""
    conditional: bool = False

    @property
    def isomorphic(self) -> bool:
        return self.status is Status.ISOMORPHIC

    def to_json(self) -> dict:
        out: dict = {"status": self.status.value, "detail": self.detail, "conditional": self.conditional}
        if self.conditional:
            out["note"] = CONDITIONAL_NOTE
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


# --------------------------------------------------------------------------
# invariants


def _sublattice_smith(d: CharData, s: str, others: list[str]) -> tuple:
    """(rank, Smith invariants) of the sum of lambda(t), t in others, inside lambda(s)."""
    amb = d.lattices[s]
    rows = []
    for t in others:
        for v in d.lattices[t].basis:
            c = amb.coordinates(v)
            if c is None:  # data not monotone; still a transform invariant
                return ("outside",)
            rows.append(c)
    inv = smith_invariants(GeneratorSet(amb.rank, tuple(rows)))
    return (len(inv), inv)


def stratum_key(d: CharData, s: str) -> tuple:
    """GL(m, Z)- and relabel-invariant local key of a stratum."""
    p = d.poset
    ups = p.upper_covers(s)
    pair_keys = sorted(_sublattice_smith(d, s, [a, b]) for a, b in itertools.combinations(ups, 2))
    return (
        p.dim(s),
        d.lattices[s].rank,
        len(ups),
        len(p.lower_covers(s)),
        _sublattice_smith(d, s, ups),
        tuple(pair_keys),
    )


def fingerprint(d: CharData) -> tuple:
    """Canonical multiset of stratum keys, prefixed by the ambient rank."""
    return (d.m, tuple(sorted(stratum_key(d, s) for s in d.poset.ids)))


def _first_mismatch_dim(a: tuple, b: tuple) -> int | None:
    ca = Counter(a[1])
    cb = Counter(b[1])
    dims = sorted({k[0] for k in ca} | {k[0] for k in cb})
    for dim in dims:
        if {k: v for k, v in ca.items() if k[0] == dim} != {k: v for k, v in cb.items() if k[0] == dim}:
            return dim
    return None


# --------------------------------------------------------------------------
# witnesses


def verify_witness(d: CharData, d2: CharData, w: IsoWitness) -> bool:
    """Independent check of the commuting condition on every stratum."""
    if d.m != d2.m or w.psi.m != d.m:
        return False
    if w.mode is Mode.STRICT and not w.psi.is_identity():
        return False
    f = w.poset_iso.mapping
    if not is_order_isomorphism(d.poset, d2.poset, f):
        return False
    return all(apply_unimodular(w.psi, d.lattices[s]) == d2.lattices[f[s]] for s in d.poset.ids)


def _facet_vectors(d: CharData) -> list[tuple[str, tuple[int, ...]]]:
    return [(s, d.lattices[s].basis[0]) for s in d.facet_strata()]


def _solve_psi(
    d: CharData, d2: CharData, f: dict[str, str], facets: list[tuple[str, tuple[int, ...]]], basis_idx: list[int]
) -> list[tuple[tuple[int, ...], UnimodularMap]]:
    """All (sign pattern, psi) with first sign +1 that work for poset map ``f``."""
    m = d.m
    V = [v for _, v in facets]
    W = [d2.lattices[f[s]].basis[0] for s, _ in facets]
    VB = [V[i] for i in basis_idx]
    found = []
    if not basis_idx:
        psi = UnimodularMap.identity(m)
        if all(apply_unimodular(psi, d.lattices[s]) == d2.lattices[f[s]] for s in d.poset.ids):
            found.append(((), psi))
        return found
    for signs in itertools.product((1, -1), repeat=len(basis_idx) - 1):
        eps_b = (1,) + signs
        WB = [[e * x for x in W[i]] for e, i in zip(eps_b, basis_idx)]
        X = _qq.solve_left(VB, WB)  # V_B @ X = W_B  with X = psi^T
        if X is None or any(x.denominator != 1 for row in X for x in row):
            continue
        Xi = [[int(x) for x in row] for row in X]
        try:
            psi = UnimodularMap(tuple(tuple(Xi[j][i] for j in range(m)) for i in range(m)))
        except LatticeError:
            continue
        eps = []
        for v, w in zip(V, W):
            img = psi.apply(v)
            if img == tuple(w):
                eps.append(1)
            elif img == tuple(-x for x in w):
                eps.append(-1)
            else:
                break
        else:
            if all(apply_unimodular(psi, d.lattices[s]) == d2.lattices[f[s]] for s in d.poset.ids):
                found.append((tuple(0 if e == 1 else 1 for e in eps), psi))
    return found


def decide(
    d: CharData,
    d2: CharData,
    mode: Mode | str = Mode.WEAK,
    *,
    prune: bool = True,
    max_signs: int = DEFAULT_MAX_SIGNS,
    chern_pullback: Callable[[IsoWitness], bool] | None = None,
) -> Verdict:
    """Decide whether ``d`` and ``d2`` are (weakly) isomorphic.

    ``prune=False`` skips the fingerprint certificate and the invariant
    pruning of the poset search; the verdict must not change. Data with
    nonzero opaque Chern classes on both sides needs ``chern_pullback``,
    a user predicate telling whether a candidate witness pulls one class
    back to the other; without it the answer is UNDECIDED.
    """
    mode = Mode(mode)
    require_valid(d)
    require_valid(d2)
    conditional = not (d.top_strata_he_asserted and d2.top_strata_he_asserted)

    def verdict(status: Status, detail: str, witness: IsoWitness | None = None) -> Verdict:
        return Verdict(status, witness, detail, conditional)

    if d.m != d2.m:
        return verdict(Status.NOT_ISOMORPHIC, f"ambient ranks differ ({d.m} vs {d2.m})")
    if d.chern.is_zero != d2.chern.is_zero:
        return verdict(Status.NOT_ISOMORPHIC, "Chern class: zero on one side, nonzero on the other")

    key_p: Callable[[str], Hashable] | None = None
    key_q: Callable[[str], Hashable] | None = None
    if prune:
        fp, fp2 = fingerprint(d), fingerprint(d2)
        if fp != fp2:
            dim = _first_mismatch_dim(fp, fp2)
            return verdict(Status.NOT_ISOMORPHIC, f"fingerprint mismatch at dim-{dim} strata")
        keys = {s: stratum_key(d, s) for s in d.poset.ids}
        keys2 = {s: stratum_key(d2, s) for s in d2.poset.ids}
        key_p, key_q = keys.__getitem__, keys2.__getitem__

    isos = enumerate_isos(d.poset, d2.poset, key_p=key_p, key_q=key_q, prune=prune)
    needs_pullback = not d.chern.is_zero

    def accept(w: IsoWitness) -> bool | None:
        if not needs_pullback:
            return True
        if chern_pullback is None:
            return None
        return chern_pullback(w)

    undecided_chern = False
    count = 0

    if mode is Mode.STRICT:
        ident = UnimodularMap.identity(d.m)
        for f in isos:
            count += 1
            fm = f.mapping
            if all(d.lattices[s] == d2.lattices[fm[s]] for s in d.poset.ids):
                w = IsoWitness(f, ident, Mode.STRICT)
                ok = accept(w)
                if ok:
                    return verdict(Status.ISOMORPHIC, "identity automorphism", w)
                undecided_chern |= ok is None
        if undecided_chern:
            return verdict(Status.UNDECIDED, "Chern class comparison needs pullback data")
        return verdict(Status.NOT_ISOMORPHIC, f"exhausted search over {count} stratified poset isomorphism(s)")

    facets = _facet_vectors(d)
    basis_idx = _qq.independent_rows([v for _, v in facets])
    spanning = len(basis_idx) == d.m
    if not spanning or len(facets) > max_signs:
        # only a poset-level negative answer is still sound
        if next(iter(isos), None) is None:
            return verdict(Status.NOT_ISOMORPHIC, "no stratified poset isomorphism")
        if not spanning:
            return verdict(Status.UNDECIDED, "facet lattices do not determine psi")
        return verdict(Status.UNDECIDED, f"sign enumeration cap exceeded ({len(facets)} > {max_signs} facets)")

    for f in isos:
        count += 1
        found = sorted(_solve_psi(d, d2, f.mapping, facets, basis_idx), key=lambda t: t[0])
        for _, psi in found:
            w = IsoWitness(f, psi, Mode.WEAK)
            ok = accept(w)
            if ok:
                return verdict(Status.ISOMORPHIC, "weak isomorphism found", w)
            undecided_chern |= ok is None
    if undecided_chern:
        return verdict(Status.UNDECIDED, "Chern class comparison needs pullback data")
    return verdict(Status.NOT_ISOMORPHIC, f"exhausted search over {count} stratified poset isomorphism(s)")


def invert_witness(w: IsoWitness) -> IsoWitness:
    return IsoWitness(w.poset_iso.inverse(), w.psi.inverse(), w.mode)


__all__ = [
    "DEFAULT_MAX_SIGNS",
    "IsoWitness",
    "Mode",
    "Status",
    "Verdict",
    "decide",
    "fingerprint",
    "invert_witness",
    "stratum_key",
    "verify_witness",
]
