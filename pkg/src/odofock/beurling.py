"""Beurling-Lax factorization of invariant subspaces and induced subrepresentations.

An invariant subspace of the truncated Fock space factors through its
wandering subspace: the map sending (word, wandering vector) to the word's
creation operator applied to the vector is unitary onto the subspace, and
composing with the inclusion yields an inner multi-analytic operator. When
the subspace is also invariant under an odometer map, conjugating by the
factorization produces the induced symbol of the subrepresentation.

Truncation semantics: a subspace is certified when it is generated below the
boundary and closed under creation up to the top level; the level-M boundary
is excluded from every residual, and words are budgeted so that all columns
of the factorization stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .config import resolve_tol
from .errors import InvarianceError, WindowError
from .fock import TruncatedFockSpace, creation_operator
from .linalg import op_norm, orthonormal_columns, orthonormal_complement
from .odometer import OdometerMap, Symbol, build_odometer, symbol_from_dense
from .words import Word


@dataclass(frozen=True)
class InvariantSubspace:
    """An orthonormal column basis of a creation-invariant subspace."""

    ambient: TruncatedFockSpace
    basis: np.ndarray
    invariance_residuals: tuple[float, ...]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T


def invariant_subspace(
    space: TruncatedFockSpace, columns: np.ndarray, tol: float | None = None
) -> InvariantSubspace:
    """Orthonormalize spanning columns and measure the creation-invariance defect.

    The residual for each generator is taken over the part of the subspace
    supported below the top level, where creation incurs no truncation.
    """
    tol = resolve_tol(tol)
    space.require_dense()
    basis = orthonormal_columns(np.asarray(columns, dtype=complex), tol)
    if basis.shape[0] != space.dim:
        raise ValueError("subspace columns do not match the ambient dimension")
    low = space.dim_upto(space.max_level - 1) if space.max_level >= 1 else 0
    # basis of S cap (levels <= M-1): kernel of the top-level block
    top_block = basis[low:, :]
    if top_block.size:
        _, s, vh = np.linalg.svd(top_block, full_matrices=True)
        rank = int(np.sum(s > tol))
        interior = basis @ vh[rank:, :].conj().T
    else:
        interior = basis
    proj = basis @ basis.conj().T
    residuals = []
    eye = np.eye(space.dim)
    for i in range(1, space.n + 1):
        si = creation_operator(i, space).matrix
        moved = si @ interior
        residuals.append(op_norm((eye - proj) @ moved))
    return InvariantSubspace(space, basis, tuple(residuals))


def levels_subspace(space: TruncatedFockSpace, lo: int, hi: int | None = None) -> InvariantSubspace:
    """The subspace spanned by levels lo..hi (hi defaults to the top level)."""
    if hi is None:
        hi = space.max_level
    cols = np.arange(space.dim_upto(lo - 1) if lo >= 1 else 0, space.dim_upto(hi))
    mat = np.zeros((space.dim, cols.size), dtype=complex)
    mat[cols, np.arange(cols.size)] = 1.0
    return invariant_subspace(space, mat)


def _require_invariant(sub: InvariantSubspace, tol: float):
    worst = max(sub.invariance_residuals) if sub.invariance_residuals else 0.0
    if worst > tol:
        raise InvarianceError("subspace is not invariant under the creation tuple", worst)


def wandering_subspace(sub: InvariantSubspace, tol: float | None = None) -> np.ndarray:
    """Orthonormal basis of S minus the creation images sum_i (S_i x I) S."""
    tol = resolve_tol(tol)
    _require_invariant(sub, tol)
    space = sub.ambient
    shifted = [creation_operator(i, space).matrix @ sub.basis for i in range(1, space.n + 1)]
    return orthonormal_complement(np.hstack(shifted), sub.basis, tol)


@dataclass(frozen=True)
class BeurlingFactorization:
    """Inner multi-analytic factorization S = Phi(F(n, budget) x E_*).

    `phi` maps the wandering-coefficient Fock truncation into the ambient
    space; `pi` is the same map written in subspace coordinates. The word
    budget keeps every column exact; `covers_subspace` records whether the
    factorization reaches all of S (it cannot when wandering vectors sit too
    close to the truncation boundary).
    """

    subspace: InvariantSubspace
    wandering_basis: np.ndarray
    domain: TruncatedFockSpace
    phi: np.ndarray
    pi: np.ndarray
    inner_residual: float
    multi_analytic_residual: float
    covers_subspace: bool
    induced_symbol: Symbol | None = None

    @property
    def wandering_dim(self) -> int:
        return self.wandering_basis.shape[1]


def beurling_factorize(
    sub: InvariantSubspace,
    tol: float | None = None,
    wandering_basis: np.ndarray | None = None,
) -> BeurlingFactorization:
    """Factor an invariant subspace through its wandering subspace.

    A custom orthonormal `wandering_basis` may be supplied (it must span the
    computed wandering subspace); different choices change the factorization
    by a unitary on the wandering space only.
    """
    tol = resolve_tol(tol)
    space = sub.ambient
    computed = wandering_subspace(sub, tol)
    if wandering_basis is None:
        wandering_basis = computed
    else:
        wandering_basis = np.asarray(wandering_basis, dtype=complex)
        if wandering_basis.shape != computed.shape:
            raise ValueError("wandering basis has the wrong shape")
        gram = wandering_basis.conj().T @ wandering_basis
        proj_gap = wandering_basis - computed @ (computed.conj().T @ wandering_basis)
        if op_norm(gram - np.eye(gram.shape[0])) > tol or op_norm(proj_gap) > tol:
            raise ValueError("wandering basis must orthonormally span the wandering subspace")
    wdim = wandering_basis.shape[1]
    if wdim == 0:
        raise WindowError("the wandering subspace is trivial; nothing to factor")

    star_level = _columns_max_level(space, wandering_basis)
    budget = space.max_level - star_level
    if budget < 1:
        raise WindowError(
            f"wandering vectors at level {star_level} leave no room for any word "
            f"below the truncation level {space.max_level}"
        )
    domain = TruncatedFockSpace(space.n, budget, wdim)
    screations = [creation_operator(i, space).matrix for i in range(1, space.n + 1)]
    phi = np.zeros((space.dim, domain.dim), dtype=complex)
    # Column (mu, j) is S_mu applied to the j-th wandering vector; walk levels
    # so each word extends an already-built column by one creation.
    phi[:, 0:wdim] = wandering_basis
    for level in range(1, budget + 1):
        for wi in range(domain.level_offset(level), domain.level_offset(level + 1)):
            word = domain.word_at(wi)
            parent = domain.word_index(Word(word.letters[1:], word.n))
            letter = word.letters[0]
            cols = slice(wi * wdim, (wi + 1) * wdim)
            pcols = slice(parent * wdim, (parent + 1) * wdim)
            phi[:, cols] = screations[letter - 1] @ phi[:, pcols]

    inner_residual = op_norm(phi.conj().T @ phi - np.eye(domain.dim))
    ma_residual = 0.0
    low = domain.dim_upto(budget - 1) if budget >= 1 else 0
    for i in range(1, space.n + 1):
        si_dom = creation_operator(i, domain).matrix
        diff = phi @ si_dom - screations[i - 1] @ phi
        ma_residual = max(ma_residual, op_norm(diff[:, :low]))

    covers = domain.dim == sub.dim
    pi = sub.basis.conj().T @ phi
    return BeurlingFactorization(
        sub, wandering_basis, domain, phi, pi, inner_residual, ma_residual, covers
    )


@dataclass(frozen=True)
class InducedSymbolResult:
    symbol: Symbol
    wmap: OdometerMap
    factorization: BeurlingFactorization
    intertwining_residual: float
    window: int


def induced_symbol(
    sub: InvariantSubspace,
    wmap: OdometerMap,
    tol: float | None = None,
    factorization: BeurlingFactorization | None = None,
) -> InducedSymbolResult:
    """Symbol of the subrepresentation carried by an odometer-invariant subspace.

    Requires the subspace to be invariant under the odometer map as well
    (range-inclusion measured as the projection residual of W restricted to
    the subspace). The induced symbol is the wandering compression of W, and
    the reported residual measures W Phi - Phi W_induced on the columns the
    word budget keeps exact.
    """
    tol = resolve_tol(tol)
    space = sub.ambient
    if wmap.space != space:
        raise ValueError("odometer map and subspace live on different spaces")
    w = wmap.operator.matrix
    proj = sub.projector()
    douglas = op_norm((np.eye(space.dim) - proj) @ (w @ sub.basis))
    if douglas > tol:
        raise InvarianceError("subspace is not invariant under the odometer map", douglas)

    fact = factorization if factorization is not None else beurling_factorize(sub, tol)
    domain = fact.domain
    lift = fact.phi.conj().T @ (w @ fact.wandering_basis)
    symbol = symbol_from_dense(domain, lift, prune=1e-13)
    induced_map = build_odometer(symbol)

    window = domain.max_level - max(symbol.support_degree, wmap.symbol.support_degree)
    ncols = domain.dim_upto(window) if window >= 0 else 0
    diff = w @ fact.phi - fact.phi @ induced_map.operator.matrix
    residual = op_norm(diff[:, :ncols])
    fact_with_symbol = replace(fact, induced_symbol=symbol)
    return InducedSymbolResult(symbol, induced_map, fact_with_symbol, residual, window)


def _columns_max_level(space: TruncatedFockSpace, columns: np.ndarray) -> int:
    d = space.coeff_dim
    mass = np.abs(columns).max(axis=1) if columns.size else np.zeros(space.dim)
    live = np.nonzero(mass > 1e-14)[0]
    if live.size == 0:
        return 0
    return space.level_of_word_index(int(live.max()) // d)
