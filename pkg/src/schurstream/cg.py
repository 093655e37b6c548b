"""Clebsch-Gordan transforms Q^d_lam (x) C^d -> (+)_j Q^d_{lam+e_j}.

Input ordering is (GT index of Q^d_lam) (x) (fundamental index) with the
fundamental index fastest-varying.  Output rows are grouped into blocks,
one per valid j, ordered j ascending; rows within a block follow the GT
basis order of the target irrep.

For d = 2 the matrix is the closed-form spin-j (x) spin-1/2 coupling with
Condon-Shortley phases.  For general d the same basis is produced
numerically: block membership is certified against the analytic Casimir
eigenvalues, the highest-weight vector of each target irrep is extracted
from the kernel of the raising generators, and the remaining columns are
propagated with the lowering generators so that the result is an exact
GT-basis intertwiner (ladder matrix elements non-negative by construction).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .gt_basis import build_irrep, casimir2
from .partitions import InvalidPartitionError, Partition, add_box, dim_unitary, valid_rows

CASIMIR_MATCH_TOL = 0.25  # analytic gaps are integers >= 1
UNITARITY_TOL = 1e-12


class EigenvalueClusteringError(RuntimeError):
    """A numerical Casimir eigenvalue matched no analytic block target."""


class DegeneracyError(RuntimeError):
    """The highest-weight / lowering construction was not uniquely solvable."""


@dataclass(frozen=True)
class Block:
    j: int
    target: Partition
    offset: int
    dim: int


@dataclass
class CGTransform:
    lam: Partition
    d: int
    matrix: np.ndarray  # (d*dimQ) x (d*dimQ), unitary
    blocks: list[Block]

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def block_slice(self, j: int) -> slice:
        for b in self.blocks:
            if b.j == j:
                return slice(b.offset, b.offset + b.dim)
        raise KeyError(f"no block for j={j} at lambda={self.lam}")

    def check_unitary(self, tol: float = UNITARITY_TOL) -> float:
        dev = np.max(np.abs(self.matrix.conj().T @ self.matrix - np.eye(self.size)))
        if dev > tol:
            raise DegeneracyError(f"CG matrix not unitary: deviation {dev}")
        return float(dev)


def _blocks_for(lam: Partition, d: int) -> list[Block]:
    blocks = []
    off = 0
    for j in valid_rows(lam):
        target = add_box(lam, j)
        dim = dim_unitary(target, d)
        blocks.append(Block(j=j, target=target, offset=off, dim=dim))
        off += dim
    assert off == d * dim_unitary(lam, d)
    return blocks


def cg_qubit(lam: Partition) -> CGTransform:
    """Closed-form d=2 transform: coupling spin j=(lam0-lam1)/2 with 1/2."""
    if lam.d != 2:
        raise ValueError(f"cg_qubit needs d=2, got {lam.d}")
    dimq = lam.parts[0] - lam.parts[1] + 1
    twoj = dimq - 1  # 2j
    size = 2 * dimq
    mat = np.zeros((size, size))
    blocks = _blocks_for(lam, 2)

    # Input column for spin projection m1 = j - s and qubit eps: 2*s + eps.
    # Upper block: total spin j + 1/2; row r has m' = (twoj+1)/2 - r.
    row = 0
    for r in range(twoj + 2):
        # "up" component: m1 = m' - 1/2  ->  s = j - m' + 1/2 = r
        # coefficient sqrt((j + m' + 1/2) / (2j + 1)) = sqrt((twoj+1-r)/(twoj+1))
        if r <= twoj:
            mat[row, 2 * r] = math.sqrt((twoj + 1 - r) / (twoj + 1))
        # "down" component: m1 = m' + 1/2  ->  s = r - 1
        if r >= 1:
            mat[row, 2 * (r - 1) + 1] = math.sqrt(r / (twoj + 1))
        row += 1
    if twoj > 0:
        # Lower block: total spin j - 1/2; row r has m' = (twoj-1)/2 - r.
        for r in range(twoj):
            # up: s = j - m' + 1/2 = r + 1, coefficient -sqrt((j-m'+1/2)/(2j+1))
            mat[row, 2 * (r + 1)] = -math.sqrt((r + 1) / (twoj + 1))
            # down: s = r, coefficient sqrt((j+m'+1/2)/(2j+1))
            mat[row, 2 * r + 1] = math.sqrt((twoj - r) / (twoj + 1))
            row += 1
    t = CGTransform(lam=lam, d=2, matrix=mat, blocks=blocks)
    t.check_unitary()
    return t


def _product_generator(rep, a: int, b: int) -> np.ndarray:
    """E_{a,b} on Q^d_lam (x) C^d (fundamental fastest)."""
    d = rep.d
    e = np.zeros((d, d))
    e[a, b] = 1.0
    return np.kron(rep.generator(a, b), np.eye(d)) + np.kron(np.eye(rep.dim), e)


def _weight_height(w: tuple[int, ...]) -> int:
    # lowering e_a -> e_{a+1} raises this by exactly 1
    return sum(a * wa for a, wa in enumerate(w))


def _intertwiner(rep, target, raisings, lowerings, prod_weights) -> np.ndarray:
    """Columns = GT basis of `target` expressed in the product space."""
    d = rep.d
    size = rep.dim * d
    mu = target.lam.parts

    # highest-weight vector: kernel of all raising generators inside the
    # weight-mu subspace of the product space
    sel = [i for i, w in enumerate(prod_weights) if w == mu]
    stacked = np.vstack([r[:, sel] for r in raisings])
    _, s, vt = np.linalg.svd(stacked, full_matrices=True)
    null_dim = sum(1 for x in s if x < 1e-9) + (len(sel) - len(s))
    if null_dim != 1:
        raise DegeneracyError(
            f"highest-weight space of {target.lam} has dimension {null_dim}")
    hw_small = vt[-1].real
    hw = np.zeros(size)
    hw[sel] = hw_small
    # phase convention: first nonzero coordinate (input ordering) positive
    lead = next(i for i in range(size) if abs(hw[i]) > 1e-9)
    if hw[lead] < 0:
        hw = -hw

    cols: dict[int, np.ndarray] = {}
    by_weight: dict[tuple[int, ...], list[int]] = {}
    for t, w in enumerate(target.weights):
        by_weight.setdefault(w, []).append(t)
    hw_idx = target.index[tuple(tuple(r) for r in _top_pattern(mu, d))]
    cols[hw_idx] = hw

    for w in sorted(by_weight, key=_weight_height):
        group = by_weight[w]
        if group == [hw_idx]:
            continue
        rows = []
        rhs = []
        for a in range(d - 1):
            w_src = list(w)
            w_src[a] += 1
            w_src[a + 1] -= 1
            w_src = tuple(w_src)
            for s_idx in by_weight.get(w_src, []):
                low = target.raising[a].T  # E_{a+1,a} on the target irrep
                coeffs = [low[t, s_idx] for t in group]
                if all(abs(c) < 1e-14 for c in coeffs):
                    continue
                rows.append(coeffs)
                rhs.append(lowerings[a] @ cols[s_idx])
        a_mat = np.array(rows)
        b_mat = np.array(rhs)
        if a_mat.ndim != 2 or a_mat.shape[0] < len(group):
            raise DegeneracyError(f"under-determined weight space {w} in {target.lam}")
        sol, _, rank, _ = np.linalg.lstsq(a_mat, b_mat, rcond=None)
        if rank < len(group):
            raise DegeneracyError(f"rank-deficient weight space {w} in {target.lam}")
        for t_local, t in enumerate(group):
            cols[t] = sol[t_local]

    v = np.zeros((size, target.dim))
    for t, col in cols.items():
        v[:, t] = col
    return v


def _top_pattern(mu: tuple[int, ...], d: int):
    return [mu[:d - k] for k in range(d)]


def cg_numeric(lam: Partition, d: int | None = None) -> CGTransform:
    """Numerical construction valid for any d; for d=2 it reproduces
    cg_qubit entrywise."""
    if d is None:
        d = lam.d
    rep = build_irrep(lam, d)
    size = rep.dim * d
    blocks = _blocks_for(lam, d)

    raisings = [_product_generator(rep, a, a + 1) for a in range(d - 1)]
    lowerings = [r.T for r in raisings]
    fund = [tuple(int(a == b) for b in range(d)) for a in range(d)]
    prod_weights = [tuple(wg + wf for wg, wf in zip(rep.weights[g], fund[f]))
                    for g in range(rep.dim) for f in range(d)]

    # certify the Casimir spectrum against the analytic block eigenvalues
    cas = np.zeros((size, size))
    for a in range(d):
        for b in range(d):
            g = _product_generator(rep, a, b)
            cas += g @ g.T
    eigvals = np.linalg.eigvalsh(cas)
    targets = {b.j: float(casimir2(b.target, d)) for b in blocks}
    counts = {j: 0 for j in targets}
    for ev in eigvals:
        match = [j for j, t in targets.items() if abs(ev - t) <= CASIMIR_MATCH_TOL]
        if len(match) != 1:
            raise EigenvalueClusteringError(
                f"Casimir eigenvalue {ev} matches {len(match)} targets at {lam}")
        counts[match[0]] += 1
    for b in blocks:
        if counts[b.j] != b.dim:
            raise EigenvalueClusteringError(
                f"block {b.target} expected dim {b.dim}, spectrum gives {counts[b.j]}")

    mat = np.zeros((size, size))
    for b in blocks:
        target = build_irrep(b.target, d)
        v = _intertwiner(rep, target, raisings, lowerings, prod_weights)
        mat[b.offset:b.offset + b.dim, :] = v.T
    t = CGTransform(lam=lam, d=d, matrix=mat, blocks=blocks)
    t.check_unitary()
    return t


_cache: dict = {}
_cache_lock = threading.Lock()


def cg_transform(lam: Partition, d: int | None = None) -> CGTransform:
    """Cached CG transform; closed form for d=2, numeric otherwise."""
    if d is None:
        d = lam.d
    key = (lam.parts, d)
    t = _cache.get(key)
    if t is None:
        with _cache_lock:
            t = _cache.get(key)
            if t is None:
                t = cg_qubit(lam) if d == 2 else cg_numeric(lam, d)
                _cache[key] = t
    return t


@dataclass
class SparsityReport:
    lam: Partition
    d: int
    size: int
    below_diagonal_nonzeros: int
    max_nonzeros_per_row: int
    two_per_row_claim_holds: bool
    givens_count: int

    def to_dict(self) -> dict:
        return {
            "lambda": str(self.lam),
            "d": self.d,
            "size": self.size,
            "below_diagonal_nonzeros": self.below_diagonal_nonzeros,
            "max_nonzeros_per_row": self.max_nonzeros_per_row,
            "two_per_row_claim_holds": self.two_per_row_claim_holds,
            "givens_count": self.givens_count,
        }


def verify_sparsity(t: CGTransform, tol: float = 1e-12) -> SparsityReport:
    """Empirical check of the <=2-nonzeros-per-row structure under this
    module's row ordering, plus the exact Givens count the decomposer uses."""
    from .resources import givens_decompose

    m = t.matrix
    below = int(np.sum(np.abs(np.tril(m, -1)) > tol))
    per_row = int(np.max(np.sum(np.abs(m) > tol, axis=1)))
    rotations, _ = givens_decompose(m)
    return SparsityReport(
        lam=t.lam, d=t.d, size=t.size,
        below_diagonal_nonzeros=below,
        max_nonzeros_per_row=per_row,
        two_per_row_claim_holds=per_row <= 2,
        givens_count=len(rotations),
    )
