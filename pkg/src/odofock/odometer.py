"""Odometer maps on truncated Fock spaces.

A symbol is a linear map L from the coefficient space into the Fock space,
stored column-sparse. The odometer map it generates acts on basis vectors by
the base-n carry and feeds the all-n words of length m into the m-fold
one-shifted copy of L. Everything here tracks the exactness window: columns
indexed by levels below `exact_below` carry no truncation error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .config import resolve_tol
from .errors import NotIsometricError
from .fock import Operator, TruncatedFockSpace, creation_word_map
from .linalg import op_norm
from .words import Overflow, Word, carry_successor

# Fixed threshold for "supported on the all-ones diagonal"; isometric symbols
# live there, so the closed-form adjoint requires it.
E1_SUPPORT_TOL = 1e-12


@dataclass(frozen=True)
class Symbol:
    """A map L: C^d -> F(n, M) tensor C^d as a (dim x d) sparse matrix.

    Column p holds the coefficients of L h_p in the canonical basis order.
    """

    space: TruncatedFockSpace
    matrix: sparse.csc_array

    def __post_init__(self):
        if self.matrix.shape != (self.space.dim, self.space.coeff_dim):
            raise ValueError(
                f"symbol matrix shape {self.matrix.shape} does not match "
                f"({self.space.dim}, {self.space.coeff_dim})"
            )
        if self.matrix.nnz and not np.all(np.isfinite(self.matrix.data)):
            raise ValueError("symbol matrix contains non-finite entries")

    @property
    def coeff_dim(self) -> int:
        return self.space.coeff_dim

    @property
    def support_degree(self) -> int:
        """Largest level carrying a nonzero coefficient (0 for the zero symbol)."""
        coo = self.matrix.tocoo()
        live = coo.row[coo.data != 0]
        if live.size == 0:
            return 0
        top_word = int(live.max()) // self.space.coeff_dim
        return self.space.level_of_word_index(top_word)

    @property
    def exact_below(self) -> int:
        """First level whose all-n column would truncate the shifted symbol."""
        return self.space.max_level - self.support_degree + 1

    def dense(self) -> np.ndarray:
        self.space.require_dense()
        return self.matrix.toarray()

    def norm(self) -> float:
        """Operator norm of L, via the d x d Gram matrix."""
        gram = (self.matrix.conj().T @ self.matrix).toarray()
        top = float(np.linalg.eigvalsh(gram)[-1])
        return float(np.sqrt(max(top, 0.0)))


def symbol_from_dense(
    space: TruncatedFockSpace, matrix: np.ndarray, prune: float = 0.0
) -> Symbol:
    """Symbol from a dense coefficient matrix.

    `prune` drops entries of relative magnitude at most that value; symbols
    recovered from dense computations need this so rounding noise does not
    inflate the support degree and destroy the exactness window.
    """
    arr = np.asarray(matrix, dtype=complex)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if prune > 0 and arr.size:
        scale = float(np.abs(arr).max())
        if scale > 0:
            arr = np.where(np.abs(arr) <= prune * scale, 0.0, arr)
    return Symbol(space, sparse.csc_array(arr))


def symbol_from_entries(
    space: TruncatedFockSpace, entries: list[tuple[int, int, complex]]
) -> Symbol:
    rows, cols, vals = [], [], []
    for r, c, v in entries:
        if not 0 <= r < space.dim:
            raise ValueError(f"symbol row {r} outside 0..{space.dim - 1}")
        if not 0 <= c < space.coeff_dim:
            raise ValueError(f"symbol column {c} outside 0..{space.coeff_dim - 1}")
        rows.append(r)
        cols.append(c)
        vals.append(complex(v))
    mat = sparse.csc_array(
        (np.array(vals, dtype=complex), (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))),
        shape=(space.dim, space.coeff_dim),
    )
    return Symbol(space, mat)


def constant_symbol(space: TruncatedFockSpace, block: np.ndarray) -> Symbol:
    """The symbol with range in the vacuum block, given by a d x d matrix."""
    block = np.asarray(block, dtype=complex)
    d = space.coeff_dim
    if block.shape != (d, d):
        raise ValueError(f"level-0 block must be {d} x {d}, got {block.shape}")
    mat = np.zeros((space.dim, d), dtype=complex)
    mat[:d, :] = block
    return symbol_from_dense(space, mat)


def scalar_symbol(space: TruncatedFockSpace, coeffs_by_level) -> Symbol:
    """d = 1 symbol on the all-ones diagonal, one coefficient per level.

    Coefficients beyond the truncation level are dropped; that is the
    canonical way to restrict an infinite sequence to a truncated space.
    """
    if space.coeff_dim != 1:
        raise ValueError("scalar symbols require coeff_dim = 1")
    entries = []
    for level, c in enumerate(np.asarray(coeffs_by_level, dtype=complex)):
        if c != 0:
            if level > space.max_level:
                break
            entries.append((space.all_ones_index(level), 0, c))
    return symbol_from_entries(space, entries)


def e1_coefficient_tensor(symbol: Symbol) -> tuple[np.ndarray, float]:
    """Coefficients on the all-ones diagonal plus the off-diagonal mass.

    Returns (c, off_residual) where c[r, s, q] is the coefficient of
    (ones^r, h_s) in L h_q and off_residual is the Frobenius norm of every
    entry living off the all-ones words.
    """
    space = symbol.space
    d = space.coeff_dim
    smax = symbol.support_degree
    c = np.zeros((smax + 1, d, d), dtype=complex)
    off_sq = 0.0
    coo = symbol.matrix.tocoo()
    for r, q, v in zip(coo.row, coo.col, coo.data):
        if v == 0:
            continue
        word_idx, s = divmod(int(r), d)
        level = space.level_of_word_index(word_idx)
        if word_idx == space.level_offset(level):
            c[level, s, q] += v
        else:
            off_sq += abs(v) ** 2
    return c, float(np.sqrt(off_sq))


def gram_sums(c: np.ndarray) -> np.ndarray:
    """Shifted coefficient correlations g[r-1][a, b] = sum_{p,q} c[p+r,q,a] conj(c[p,q,b]).

    These are the inner products of L h_a against the r-fold one-shifted
    copies of L h_b, for r = 1..support degree; an isometric symbol makes
    them all vanish.
    """
    smax = c.shape[0] - 1
    d = c.shape[1]
    out = np.zeros((max(smax, 0), d, d), dtype=complex)
    for r in range(1, smax + 1):
        acc = np.zeros((d, d), dtype=complex)
        for p in range(0, smax - r + 1):
            # sum_q c[p+r][q, a] conj(c[p][q, b])
            acc += c[p + r].T @ c[p].conj()
        out[r - 1] = acc
    return out


@dataclass(frozen=True)
class OdometerMap:
    """A symbol together with its truncated dense matrix."""

    symbol: Symbol
    operator: Operator

    @property
    def space(self) -> TruncatedFockSpace:
        return self.symbol.space

    @property
    def exact_below(self) -> int:
        return self.operator.exact_below


def _all_n_word_index(space: TruncatedFockSpace, m: int) -> int:
    return space.level_offset(m) + space.n**m - 1


def build_odometer(symbol: Symbol) -> OdometerMap:
    """Dense matrix of the odometer map generated by `symbol`.

    Non-overflow basis words move by the base-n carry (level preserving,
    always exact); the all-n word of length m receives the m-shifted symbol
    column, truncated at the top level. The vacuum is the m = 0 case, so
    W(vacuum, h_p) = L h_p holds exactly.
    """
    space = symbol.space
    space.require_dense()
    n, d, top = space.n, space.coeff_dim, space.max_level
    mat = np.zeros((space.dim, space.dim), dtype=complex)
    coords = np.arange(d)

    for m in range(1, top + 1):
        lo = space.level_offset(m)
        for pos in range(n**m - 1):
            word = space.word_at(lo + pos)
            succ = carry_successor(word)
            assert isinstance(succ, Word)
            target = space.word_index(succ)
            mat[target * d + coords, (lo + pos) * d + coords] = 1.0

    coo = symbol.matrix.tocoo()
    for m in range(0, top + 1):
        src = _all_n_word_index(space, m)
        for r, q, v in zip(coo.row, coo.col, coo.data):
            word_idx, s = divmod(int(r), d)
            shifted = space.shift_word_index(word_idx, m)
            if shifted is not None:
                mat[shifted * d + s, src * d + q] += v

    op = Operator(mat, space, symbol.exact_below)
    return OdometerMap(symbol, op)


def apply_odometer(symbol: Symbol, coords: dict[int, complex]) -> dict[int, complex]:
    """Matrix-free action of the odometer map on a sparse coordinate vector.

    Works at any truncation size; components pushed above the top level are
    dropped exactly as in the dense construction.
    """
    space = symbol.space
    d = space.coeff_dim
    out: dict[int, complex] = {}
    col_cache: dict[int, list[tuple[int, int, complex]]] = {}

    def column_entries(q: int):
        if q not in col_cache:
            col = symbol.matrix[:, [q]].tocoo()
            col_cache[q] = [
                (int(r) // d, int(r) % d, v) for r, v in zip(col.row, col.data) if v != 0
            ]
        return col_cache[q]

    for b, a in coords.items():
        if a == 0:
            continue
        word_idx, p = divmod(b, d)
        word = space.word_at(word_idx)
        if word.is_vacuum():
            step: Word | Overflow = Overflow(0)
        else:
            step = carry_successor(word)
        if isinstance(step, Overflow):
            for row_word, s, v in column_entries(p):
                shifted = space.shift_word_index(row_word, step.length)
                if shifted is not None:
                    key = shifted * d + s
                    out[key] = out.get(key, 0.0) + a * v
        else:
            key = space.word_index(step) * d + p
            out[key] = out.get(key, 0.0) + a
    return out


@dataclass(frozen=True)
class RepresentationCheck:
    """Outcome of testing the carry and twist relations against a candidate W."""

    is_representation: bool
    symbol: Symbol | None
    residuals: dict[str, float] = field(default_factory=dict)
    window: int = -1


def verify_fock_representation(
    op: Operator, space: TruncatedFockSpace | None = None, tol: float | None = None
) -> RepresentationCheck:
    """Check W S_k = S_{k+1} (k < n) and W S_n = S_1 W on the exactness window.

    Both relations are tested on basis columns of level <= min(M-1,
    exact_below-2) so that no truncated column enters either side. On success
    the unique symbol is read off the vacuum columns; on failure the
    per-relation residual norms are returned. A negative window makes the
    verdict vacuous.
    """
    tol = resolve_tol(tol)
    if space is None:
        space = op.space
    if space is None:
        raise ValueError("an explicit space is required for a space-free operator")
    if op.matrix.shape[0] != space.dim:
        raise ValueError("operator dimension does not match the space")
    n, d, top = space.n, space.coeff_dim, space.max_level
    mat = op.matrix
    window = min(top - 1, op.exact_below - 2)
    residuals: dict[str, float] = {}

    if window >= 0:
        ncols = space.dim_upto(window)
        cols = np.arange(ncols)
        word_maps = [creation_word_map(space, i + 1) for i in range(n)]

        def basis_map(word_targets: np.ndarray) -> np.ndarray:
            word_part = word_targets[cols // d]
            return word_part * d + cols % d

        for k in range(1, n):
            lhs = mat[:, basis_map(word_maps[k - 1])].copy()
            rhs_rows = basis_map(word_maps[k])
            lhs[rhs_rows, cols] -= 1.0
            residuals[f"carry_relation_{k}"] = op_norm(lhs)

        lhs = mat[:, basis_map(word_maps[n - 1])].copy()
        low = space.dim_upto(top - 1)
        rows_low = np.arange(low)
        s1_rows = word_maps[0][rows_low // d] * d + rows_low % d
        lhs[s1_rows, :] -= mat[:low, :ncols]
        residuals["twist_relation"] = op_norm(lhs)

    passed = all(v <= tol for v in residuals.values())
    symbol = None
    if passed:
        symbol = Symbol(space, sparse.csc_array(mat[:, :d]))
    return RepresentationCheck(passed, symbol, residuals, window)


def _strip_leading_ones(word: Word) -> tuple[int, tuple[int, ...]]:
    m = 0
    letters = word.letters
    while m < len(letters) and letters[m] == 1:
        m += 1
    return m, letters[m:]


def isometry_residuals(symbol: Symbol) -> tuple[float, float, float]:
    """(gram residual of L*L - I, all-ones support residual, shifted-correlation residual).

    Correlations are only assertable for shifts within the exactness window:
    beyond it the shifted symbol copy is itself truncated, so those sums are
    excluded (their cancelling mass lives above the truncation).
    """
    d = symbol.space.coeff_dim
    gram = (symbol.matrix.conj().T @ symbol.matrix).toarray()
    iso_res = op_norm(gram - np.eye(d))
    c, off_res = e1_coefficient_tensor(symbol)
    window = symbol.space.max_level - symbol.support_degree
    sums = gram_sums(c)[: max(window, 0)]
    corr_res = float(np.abs(sums).max()) if sums.size else 0.0
    return iso_res, off_res, corr_res


def adjoint_isometric(wmap: OdometerMap, tol: float | None = None) -> Operator:
    """Closed-form adjoint matrix of an isometric odometer map.

    On the all-ones word of length m the adjoint returns the reversed
    correlation of the symbol coefficients against the all-n words of length
    <= m; elsewhere it undoes the carry. The result never raises level, so
    every column is exact.

    Raises NotIsometricError when the symbol is not supported on the
    all-ones diagonal or fails the isometry conditions: no closed form is
    available then, only the approximate conjugate transpose.
    """
    tol = resolve_tol(tol)
    symbol = wmap.symbol
    space = symbol.space
    space.require_dense()
    iso_res, off_res, corr_res = isometry_residuals(symbol)
    if off_res > E1_SUPPORT_TOL:
        raise NotIsometricError(
            f"symbol has mass {off_res:.3e} off the all-ones diagonal; "
            "the closed-form adjoint exists only for isometric symbols"
        )
    if iso_res > tol or corr_res > tol:
        raise NotIsometricError(
            f"symbol is not isometric (gram residual {iso_res:.3e}, "
            f"shifted-correlation residual {corr_res:.3e}); the closed-form "
            "adjoint exists only for isometric symbols"
        )

    c, _ = e1_coefficient_tensor(symbol)
    smax = c.shape[0] - 1
    n, d = space.n, space.coeff_dim
    mat = np.zeros((space.dim, space.dim), dtype=complex)
    for wi in range(space.num_words):
        word = space.word_at(wi)
        m, rest = _strip_leading_ones(word)
        if not rest:
            # column (ones^m, h_l): rows (all-n^p, h_q) with weight conj(c[m-p, l, q])
            for p in range(m + 1):
                r = m - p
                if r > smax:
                    continue
                row_word = _all_n_word_index(space, p)
                for l in range(d):
                    for q in range(d):
                        v = c[r, l, q]
                        if v != 0:
                            mat[row_word * d + q, wi * d + l] = np.conj(v)
        else:
            target = Word((space.n,) * m + (rest[0] - 1,) + rest[1:], n)
            ti = space.word_index(target)
            for l in range(d):
                mat[ti * d + l, wi * d + l] = 1.0
    return Operator(mat, space, space.max_level + 1)


@dataclass(frozen=True)
class NormBounds:
    """Symbol norm, truncated map norm, and the upper-sandwich defect.

    symbol_norm <= map_norm always (the vacuum columns never truncate).
    upper_defect = max(0, map_norm - (1 + symbol_norm)). A positive value is
    a certificate that the idealized bound ||W_L|| <= 1 + ||L|| fails for
    this symbol: the truncated norm can only underestimate the untruncated
    one. The bound does fail in general; over a one-letter alphabet the
    odometer map is Toeplitz multiplication by the symbol, whose norm
    approaches the sup of the symbol function and can exceed 1 plus its
    coefficient norm (e.g. 1 + z + z^2).
    """

    symbol_norm: float
    map_norm: float
    upper_defect: float


def norm_bounds(wmap: OdometerMap) -> NormBounds:
    """Both norms plus the sandwich diagnostics.

    The lower bound ||L|| <= truncated ||W_L|| is exact and enforced; a
    violation would be a construction bug. The upper direction is reported
    through `upper_defect` rather than asserted, since it is falsifiable.
    """
    symbol_norm = wmap.symbol.norm()
    map_norm = op_norm(wmap.operator)
    slack = 1e-9 * (1.0 + symbol_norm)
    if symbol_norm > map_norm + slack:
        raise RuntimeError(
            f"lower norm bound violated: ||L|| = {symbol_norm}, "
            f"truncated ||W|| = {map_norm}"
        )
    return NormBounds(symbol_norm, map_norm, max(0.0, map_norm - 1.0 - symbol_norm))
