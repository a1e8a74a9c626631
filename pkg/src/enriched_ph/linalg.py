"""Small dense exact linear algebra over a prime field F_p.

Matrices are immutable row tuples of ints reduced mod p.  Sizes here are tiny
(boundary matrices of complexes on a handful of points), so plain Gaussian
elimination is the right tool.
"""


def _inv_mod(a: int, p: int) -> int:
    return pow(a, p - 2, p)


class ModMatrix:
    __slots__ = ("p", "nrows", "ncols", "rows")

    def __init__(self, rows, ncols: int, p: int):
        self.p = p
        self.rows = tuple(tuple(v % p for v in r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = ncols
        for r in self.rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")

    @classmethod
    def zeros(cls, nrows: int, ncols: int, p: int) -> "ModMatrix":
        return cls([[0] * ncols for _ in range(nrows)], ncols, p)

    @classmethod
    def identity(cls, n: int, p: int) -> "ModMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n, p)

    @classmethod
    def from_columns(cls, cols, nrows: int, p: int) -> "ModMatrix":
        rows = [[c[i] % p for c in cols] for i in range(nrows)]
        return cls(rows, len(cols), p)

    def column(self, j: int):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def __matmul__(self, other: "ModMatrix") -> "ModMatrix":
        if self.ncols != other.nrows or self.p != other.p:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        p = self.p
        orows = other.rows
        out = []
        for r in self.rows:
            acc = [0] * other.ncols
            for k, v in enumerate(r):
                if v:
                    ork = orows[k]
                    for j in range(other.ncols):
                        acc[j] = (acc[j] + v * ork[j]) % p
            out.append(acc)
        return ModMatrix(out, other.ncols, p)

    def __eq__(self, other):
        return (
            isinstance(other, ModMatrix)
            and self.p == other.p
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.p, self.nrows, self.ncols, self.rows))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def rank(self) -> int:
        return len(_echelon([list(r) for r in self.rows], self.p)[1])

    def transpose(self) -> "ModMatrix":
        return ModMatrix(
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            self.nrows,
            self.p,
        )

    def __repr__(self):
        return f"ModMatrix({self.nrows}x{self.ncols} mod {self.p})"


def _echelon(rows, p):
    """In-place row echelon; returns (rows, pivot column list)."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        sel = next((i for i in range(r, nrows) if rows[i][c] % p), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = _inv_mod(rows[r][c] % p, p)
        rows[r] = [(v * inv) % p for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] % p:
                f = rows[i][c] % p
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def kernel_basis(m: ModMatrix):
    """Basis of the right kernel, as column vectors."""
    rows, pivots = _echelon([list(r) for r in m.rows], m.p)
    pivot_set = set(pivots)
    free = [c for c in range(m.ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [0] * m.ncols
        vec[fc] = 1
        for ri, pc in enumerate(pivots):
            vec[pc] = (-rows[ri][fc]) % m.p
        basis.append(tuple(vec))
    return basis


class ColumnSolver:
    """Incremental column-echelon structure over F_p.

    add(col) reduces col against the stored echelon columns; returns the
    residue and records it when nonzero.  coords(col) expresses col as a
    combination of the added independent columns, or returns None.
    """

    def __init__(self, nrows: int, p: int):
        self.nrows = nrows
        self.p = p
        self.cols = []  # reduced columns
        self.pivots = []  # pivot row of each reduced column
        self.history = []  # combination of original added columns giving each reduced one
        self.n_added = 0

    def _reduce(self, col):
        p = self.p
        col = [v % p for v in col]
        combo = {}
        changed = True
        while changed:
            changed = False
            low = next((i for i in range(self.nrows - 1, -1, -1) if col[i]), None)
            if low is None:
                break
            for ci, piv in enumerate(self.pivots):
                if piv == low:
                    f = (col[low] * _inv_mod(self.cols[ci][low], p)) % p
                    for i in range(self.nrows):
                        col[i] = (col[i] - f * self.cols[ci][i]) % p
                    for k, v in self.history[ci].items():
                        combo[k] = (combo.get(k, 0) - f * v) % p
                    changed = True
                    break
        return col, combo

    def add(self, col) -> bool:
        """True if col was independent of what is stored."""
        col, combo = self._reduce(col)
        idx = self.n_added
        self.n_added += 1
        low = next((i for i in range(self.nrows - 1, -1, -1) if col[i]), None)
        if low is None:
            return False
        combo[idx] = 1
        self.cols.append(col)
        self.pivots.append(low)
        self.history.append(combo)
        return True

    def coords(self, col):
        """Coefficients over the added original columns reproducing col, or None."""
        col, combo = self._reduce(col)
        if any(col):
            return None
        return {k: (-v) % self.p for k, v in combo.items() if v}
