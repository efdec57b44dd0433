"""Truncated Fock space of the level-1 representation: the brute-force oracle.

Basis states are momentum vectors lam (root-lattice coordinates) dressed
with one partition per node, ``prod_k a_i[-m_k] |lam>``.  Matrix elements
are computed purely from commutators (PBW style): annihilators are pushed
through creators with the bracket table, so no inner-product convention
enters.  a_i[0] acts on |lam> with eigenvalue beta * (A lam)_i, hence
P_i = a_i[0]/beta has the integer eigenvalue (A lam)_i and every E/F/H
mode matrix carries integer mode indices within a sector.

Mode convention: X[n] is the coefficient of z^{-n} in X(z).  On sector
lam the zero modes contribute the fixed power z^{off} with
off = sum pvec . (A lam), so X[n] maps degree g to the single degree
g - n - off.  Because each (mode, source degree) pair hits exactly one
target degree, every block under the chosen cap is exact, with no
truncation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import CartanMatrix, DeformationParams
from .currents import CurrentSpec, current_spec
from .heisenberg import ModeBracketTable, osc_coeff

State = tuple[tuple[int, ...], ...]  # one descending partition per node
Key = tuple[State, int, int]  # (oscillators, z-power, w-power)
Blocks = dict[int, tuple[int, np.ndarray]]  # src_deg -> (tgt_deg, matrix)


@dataclass(frozen=True)
class FockBasisState:
    momentum: tuple[int, ...]
    oscillators: State

    @property
    def degree(self) -> int:
        return sum(sum(part) for part in self.oscillators)


@lru_cache(maxsize=None)
def _partitions(n: int, max_part: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def states_of_degree(rank: int, degree: int) -> tuple[State, ...]:
    """All rank-tuples of partitions with total weight `degree`, ordered."""
    if rank == 1:
        return tuple((p,) for p in _partitions(degree, degree))
    out = []
    for d0 in range(degree, -1, -1):
        for p0 in _partitions(d0, d0):
            for rest in states_of_degree(rank - 1, degree - d0):
                out.append((p0,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _state_index(rank: int, degree: int) -> dict[State, int]:
    return {s: k for k, s in enumerate(states_of_degree(rank, degree))}


@lru_cache(maxsize=None)
def _degree_starts(rank: int, cap: int) -> tuple[int, ...]:
    starts = [0]
    for d in range(cap + 1):
        starts.append(starts[-1] + len(states_of_degree(rank, d)))
    return tuple(starts)


def enumerate_sector(lam, cap: int) -> list[FockBasisState]:
    """Ordered basis of a sector: by degree 0..cap, deterministic within."""
    lam = tuple(int(x) for x in lam)
    if cap < 0:
        raise ValueError("degree cap must be nonnegative")
    out = []
    for d in range(cap + 1):
        out.extend(FockBasisState(lam, s) for s in states_of_degree(len(lam), d))
    return out


def sector_dimension(rank: int, cap: int) -> int:
    return sum(len(states_of_degree(rank, d)) for d in range(cap + 1))


# ---------------------------------------------------------------------------
# degree-block operator algebra


def blocks_compose(outer: Blocks, inner: Blocks) -> Blocks:
    out: Blocks = {}
    for src, (mid, m1) in inner.items():
        if mid in outer:
            tgt, m2 = outer[mid]
            out[src] = (tgt, m2 @ m1)
    return out


def blocks_linear(parts: list[tuple[complex, Blocks]]) -> Blocks:
    """Linear combination; contributing blocks must agree on target degrees."""
    out: Blocks = {}
    for c, b in parts:
        for src, (tgt, m) in b.items():
            if src in out:
                tgt0, m0 = out[src]
                if tgt0 != tgt:
                    raise ValueError("degree-incompatible blocks in linear combination")
                out[src] = (tgt0, m0 + c * m)
            else:
                out[src] = (tgt, c * m)
    return out


def blocks_max_abs(b: Blocks) -> float:
    return max((float(np.max(np.abs(m))) for _, m in b.values()), default=0.0)


class ModeWindowError(ValueError):
    """Requested mode falls outside the exactly-computable window."""


@dataclass
class ModeMatrix:
    spec: CurrentSpec
    mode: int
    source_sector: tuple[int, ...]
    target_sector: tuple[int, ...]
    sector_offset: int  # zero-mode z-power on the source sector
    entries: np.ndarray  # dense, target basis x source basis
    source_basis: list[FockBasisState]
    target_basis: list[FockBasisState]


class FockSpace:
    """Sector-wise current application for one algebra and parameter set."""

    def __init__(self, cartan: CartanMatrix, params: DeformationParams):
        self.cartan = cartan
        self.params = params
        self.rank = cartan.rank
        self.table = ModeBracketTable(cartan, params)
        self._modes_cache: dict = {}

    # -- elementary actions ----------------------------------------------------

    def _annihilate(self, node: int, m: int, terms: dict[Key, complex]) -> dict[Key, complex]:
        """One application of a_node[m] (m > 0), a derivation across nodes."""
        out: dict[Key, complex] = {}
        arow = self.cartan.entries[node]
        for (state, zd, wd), coeff in terms.items():
            for j in range(self.rank):
                if arow[j] == 0:
                    continue
                mult = state[j].count(m)
                if mult == 0:
                    continue
                b = self.table.value(int(arow[j]), m)
                lst = list(state[j])
                lst.remove(m)
                key = (state[:j] + (tuple(lst),) + state[j + 1 :], zd, wd)
                out[key] = out.get(key, 0.0 + 0.0j) + coeff * mult * b
        return out

    def _apply_annihilation_exp(
        self, node: int, var: int, kappa, terms: dict[Key, complex]
    ) -> dict[Key, complex]:
        """exp(sum_{m>0} kappa(m) a_node[m] var^{-m}) applied to a term dict."""
        max_m = 0
        for state, _, _ in terms:
            for part in state:
                if part:
                    max_m = max(max_m, part[0])
        total = dict(terms)
        for m in range(1, max_m + 1):
            km = kappa(m)
            level = total
            accum = dict(total)
            r = 1
            while level:
                raw = self._annihilate(node, m, level)
                if not raw:
                    break
                level = {}
                for (state, zd, wd), coeff in raw.items():
                    key = (state, zd - m, wd) if var == 0 else (state, zd, wd - m)
                    level[key] = level.get(key, 0.0 + 0.0j) + coeff * km / r
                for key, c in level.items():
                    accum[key] = accum.get(key, 0.0 + 0.0j) + c
                r += 1
            total = accum
        return total

    def _apply_creation_exp(
        self, node: int, var: int, kappa, terms: dict[Key, complex], cap: int
    ) -> dict[Key, complex]:
        """exp(sum_{m>0} kappa(-m) a_node[-m] var^{+m}), truncated at degree cap."""
        coeff_cache: dict[tuple[int, ...], complex] = {}

        def addition_coeff(added: tuple[int, ...]) -> complex:
            c = coeff_cache.get(added)
            if c is None:
                c = 1.0 + 0.0j
                for m in set(added):
                    r = added.count(m)
                    c *= kappa(-m) ** r / math.factorial(r)
                coeff_cache[added] = c
            return c

        out: dict[Key, complex] = {}
        for (state, zd, wd), coeff in terms.items():
            headroom = cap - sum(sum(p) for p in state)
            for add_deg in range(max(headroom, -1) + 1):
                for added in _partitions(add_deg, add_deg):
                    c = coeff * addition_coeff(added)
                    merged = tuple(sorted(state[node] + added, reverse=True))
                    ns = state[:node] + (merged,) + state[node + 1 :]
                    key = (ns, zd + add_deg, wd) if var == 0 else (ns, zd, wd + add_deg)
                    out[key] = out.get(key, 0.0 + 0.0j) + c
        return out

    # -- full normal-ordered application ----------------------------------------

    def _merged_legs(self, specs_vars) -> list[tuple[int, int, object]]:
        """Oscillator legs merged per (node, var): coefficients of a_node[m] add."""
        groups: dict[tuple[int, int], list[tuple[str, complex]]] = {}
        for spec, var in specs_vars:
            for kind, shift in spec.constituents:
                cls = "E" if kind in ("S+", "E") else "F"
                groups.setdefault((spec.node, var), []).append((cls, complex(shift)))
        legs = []
        for (node, var), members in groups.items():
            legs.append((node, var, _merged_kappa(self.params, tuple(members))))
        return legs

    def _zero_mode(self, spec: CurrentSpec, lam) -> tuple[complex, int]:
        """Scalar factor and z-power of the zero modes acting on sector lam."""
        alam = self.cartan.pairing(lam)
        scalar = 1.0 + 0.0j
        offset = 0
        for const, pvec in spec.momentum_data(self.params):
            if pvec is None:
                raise ValueError(
                    f"{spec.kind} has non-integer momentum exponents; "
                    "the Fock route supports E, F and H currents only"
                )
            e = int(pvec @ alam)
            scalar *= const**e
            offset += e
        return scalar, offset

    def _apply(self, specs_vars, lam, src_cap: int, tgt_cap: int):
        """Normal-ordered product of currents on sector lam.

        Returns (target_sector, offsets, modes) with modes mapping
        (n_z, n_w) -> Blocks.  Exact for every block whose target degree is
        at most tgt_cap.
        """
        lam = tuple(int(x) for x in lam)
        legs = self._merged_legs(specs_vars)
        scalar = 1.0 + 0.0j
        off = [0, 0]
        tgt = np.asarray(lam, dtype=int)
        for spec, var in specs_vars:
            s, o = self._zero_mode(spec, lam)
            scalar *= s
            off[var] += o
            charge = spec.p_charge()
            if charge is None:
                raise ValueError("non-lattice charge; Fock route unsupported")
            tgt = tgt + charge
        modes: dict[tuple[int, int], Blocks] = {}
        for src_deg in range(src_cap + 1):
            src_states = states_of_degree(self.rank, src_deg)
            for col, s0 in enumerate(src_states):
                terms: dict[Key, complex] = {((s0), 0, 0): scalar}
                for node, var, kap in legs:
                    terms = self._apply_annihilation_exp(node, var, kap, terms)
                for node, var, kap in legs:
                    terms = self._apply_creation_exp(node, var, kap, terms, tgt_cap)
                for (state, zd, wd), coeff in terms.items():
                    if coeff == 0.0:
                        continue
                    nz, nw = -(zd + off[0]), -(wd + off[1])
                    tdeg = sum(sum(p) for p in state)
                    block_map = modes.setdefault((nz, nw), {})
                    if src_deg not in block_map:
                        block_map[src_deg] = (
                            tdeg,
                            np.zeros(
                                (len(states_of_degree(self.rank, tdeg)), len(src_states)),
                                dtype=complex,
                            ),
                        )
                    _, mat = block_map[src_deg]
                    mat[_state_index(self.rank, tdeg)[state], col] += coeff
        return tuple(int(x) for x in tgt), tuple(off), modes

    def sector_modes(self, spec: CurrentSpec, lam, src_cap: int, tgt_cap: int):
        """(target_sector, offset, dict[n] -> Blocks) for one current; cached."""
        key = (spec.kind, spec.node, tuple(int(x) for x in lam), src_cap, tgt_cap)
        if key not in self._modes_cache:
            tgt, offs, modes = self._apply([(spec, 0)], lam, src_cap, tgt_cap)
            self._modes_cache[key] = (
                tgt,
                offs[0],
                {nz: blocks for (nz, _), blocks in modes.items()},
            )
        return self._modes_cache[key]

    def pair_modes(self, spec_x: CurrentSpec, spec_y: CurrentSpec, lam, src_cap: int, tgt_cap: int):
        """(target_sector, offsets, dict[(m, n)] -> Blocks) for :X(z) Y(w):."""
        key = (
            "pair", spec_x.kind, spec_x.node, spec_y.kind, spec_y.node,
            tuple(int(x) for x in lam), src_cap, tgt_cap,
        )
        if key not in self._modes_cache:
            self._modes_cache[key] = self._apply(
                [(spec_x, 0), (spec_y, 1)], lam, src_cap, tgt_cap
            )
        return self._modes_cache[key]

    # -- public operations -------------------------------------------------------

    def current_mode_matrix(self, spec: CurrentSpec, n: int, lam, cap: int) -> ModeMatrix:
        """Exact matrix of X[n] between degree-capped sector bases."""
        lam = tuple(int(x) for x in lam)
        _, offset = self._zero_mode(spec, lam)
        lo, hi = -cap - offset, cap - offset
        if not lo <= n <= hi:
            raise ModeWindowError(
                f"mode {n} outside the exact window [{lo}, {hi}] at cap {cap} "
                f"(sector offset {offset})"
            )
        tgt, _, modes = self.sector_modes(spec, lam, cap, cap + abs(n + offset))
        src_basis = enumerate_sector(lam, cap)
        tgt_basis = enumerate_sector(tgt, cap)
        starts = _degree_starts(self.rank, cap)
        mat = np.zeros((len(tgt_basis), len(src_basis)), dtype=complex)
        for src_deg, (tgt_deg, block) in modes.get(n, {}).items():
            if tgt_deg > cap:
                continue
            r0, c0 = starts[tgt_deg], starts[src_deg]
            mat[r0 : r0 + block.shape[0], c0 : c0 + block.shape[1]] = block
        return ModeMatrix(
            spec=spec,
            mode=n,
            source_sector=lam,
            target_sector=tgt,
            sector_offset=offset,
            entries=mat,
            source_basis=src_basis,
            target_basis=tgt_basis,
        )

    def commutator_check(
        self,
        spec_a: CurrentSpec,
        spec_b: CurrentSpec,
        sectors,
        cap: int,
        window: int,
    ) -> "CommutatorReport":
        """Entry-wise residuals of the E/F commutation relation on mode matrices.

        i = j: [E[m], F[n]] is compared against
        (q^{(m-n)/2} Hp[m+n-2] - (q/p)^{(m-n)/2} Hm[m+n-2]) / (p - 1).
        A_ij = -1: compared against the finite regular part
        2((p/q)^{1/2} B[m+1, n] - q^{1/2} B[m, n+1]) with B the bilocal
        :E F: modes.  A_ij = 0: the commutator must vanish identically.
        """
        if spec_a.kind != "E" or spec_b.kind != "F":
            raise ValueError("commutator_check is defined for the (E, F) pair only")
        i, j = spec_a.node, spec_b.node
        params, cartan = self.params, self.cartan
        a_ij = cartan[i, j]
        alpha_i = np.eye(self.rank, dtype=int)[i]
        alpha_j = np.eye(self.rank, dtype=int)[j]
        rows = []
        for lam in sectors:
            lam = tuple(int(x) for x in lam)
            alam = cartan.pairing(lam)
            off_e, off_f = int(alam[i]), -int(alam[j])
            off_e_mid = int(cartan.pairing(np.asarray(lam) - alpha_j)[i])
            off_f_mid = int(cartan.pairing(np.asarray(lam) + alpha_i)[j])
            c_mid = cap + window + max(abs(off_e), abs(off_f))
            capmax = max(
                c_mid + window + max(abs(off_e_mid), abs(off_f_mid)),
                cap + 2 * window + 2 + abs(off_e) + abs(off_f),
            )
            _, _, f_modes = self.sector_modes(spec_b, lam, cap, c_mid)
            _, _, e_mid = self.sector_modes(
                spec_a, tuple(np.asarray(lam) - alpha_j), c_mid, capmax
            )
            _, _, e_modes = self.sector_modes(spec_a, lam, cap, c_mid)
            _, _, f_mid = self.sector_modes(
                spec_b, tuple(np.asarray(lam) + alpha_i), c_mid, capmax
            )
            if i == j:
                hp = current_spec("H+", i, self.rank, params)
                hm = current_spec("H-", i, self.rank, params)
                _, _, hp_modes = self.sector_modes(hp, lam, cap, capmax)
                _, _, hm_modes = self.sector_modes(hm, lam, cap, capmax)
            elif a_ij == -1:
                _, _, b_modes = self.pair_modes(spec_a, spec_b, lam, cap, capmax)
            qh, pqh = params.q_half, params.pq_half
            for m in range(-window, window + 1):
                for n in range(-window, window + 1):
                    ef = blocks_compose(e_mid.get(m, {}), f_modes.get(n, {}))
                    fe = blocks_compose(f_mid.get(n, {}), e_modes.get(m, {}))
                    lhs = blocks_linear([(1.0, ef), (-1.0, fe)])
                    scale = max(blocks_max_abs(ef), blocks_max_abs(fe))
                    if i == j:
                        w_p = qh ** (m - n) / (params.p - 1)
                        w_m = -((1 / pqh) ** (m - n)) / (params.p - 1)
                        rhs = blocks_linear(
                            [
                                (w_p, hp_modes.get(m + n - 2, {})),
                                (w_m, hm_modes.get(m + n - 2, {})),
                            ]
                        )
                    elif a_ij == -1:
                        rhs = blocks_linear(
                            [
                                (2 * pqh, b_modes.get((m + 1, n), {})),
                                (-2 * qh, b_modes.get((m, n + 1), {})),
                            ]
                        )
                    else:
                        rhs = {}
                    diff = blocks_linear([(1.0, lhs), (-1.0, rhs)])
                    scale = max(scale, blocks_max_abs(rhs), 1e-300)
                    rows.append(((lam, m, n), blocks_max_abs(diff) / scale, scale))
        max_res = max((r for _, r, _ in rows), default=0.0)
        return CommutatorReport(
            node_i=i,
            node_j=j,
            cartan_entry=a_ij,
            cap=cap,
            window=window,
            residuals=rows,
            max_residual=max_res,
        )


@dataclass
class CommutatorReport:
    node_i: int
    node_j: int
    cartan_entry: int
    cap: int
    window: int
    residuals: list
    max_residual: float


@lru_cache(maxsize=None)
def _merged_kappa(params: DeformationParams, members: tuple[tuple[str, complex], ...]):
    memo: dict[int, complex] = {}

    def kappa(m: int) -> complex:
        v = memo.get(m)
        if v is None:
            v = sum(osc_coeff(cls, params, m) * shift ** (-m) for cls, shift in members)
            memo[m] = v
        return v

    return kappa
