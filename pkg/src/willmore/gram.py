"""Gram-matrix construction of superconformal minimal surfaces.

From a prescribed pole ansatz for x_z with unknown coefficient vectors,
the conditions x_z.x_z = 0 (conformality), x_zz.x_zz = 0 (1-isotropy) and
residue-freeness are linear in the symmetric Gram unknowns
lambda_jk = v_j.v_k.  The system is built and solved exactly; the solved
Gram matrix is realized by explicit coefficient vectors (numeric Takagi
factorization, with an exact sequential realization over the coefficient
field when available), and the surface is assembled by exact integration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import Poly, Rat, hermite_reduce, poly_gcd, rational_integral
from .field import Element
from .surface import MinimalSurface

ZERO = Element(0)
ONE = Element(1)


class GramError(ValueError):
    pass


class Inconsistent(GramError):
    pass


class RankExceedsDimension(GramError):
    pass


# -- ansatz ---------------------------------------------------------------

@dataclass
class Ansatz:
    """x_z = sum over terms of (scalar rational function) * (unknown vector),
    subject to linear vector relations (e.g. residue elimination)."""
    terms: list            # [(name, Rat)] in a fixed order
    relations: list = field(default_factory=list)  # [{name: Element}] = 0

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.terms]

    def function(self, name: str) -> Rat:
        for n, f in self.terms:
            if n == name:
                return f
        raise GramError(f"unknown vector {name!r}")


def pole_ansatz(poles: dict, tail_degree: int | None = None,
                names: dict | None = None) -> Ansatz:
    """Partial-fraction ansatz: for each pole p of maximal order m, terms
    1/(z-p)^k for k = m down to 2 (no residue terms), plus a polynomial
    tail z^j for j = 0..tail_degree.  ``names`` optionally maps (p, k) and
    ("tail", j) to friendly labels."""
    z = Poly.x()
    names = names or {}
    terms = []
    for p, m in poles.items():
        if m < 2:
            raise GramError("pole orders below 2 would carry residues")
        pe = p if isinstance(p, Element) else Element(p)
        lin = z - Poly([pe])
        for k in range(m, 1, -1):
            label = names.get((p, k), f"p{p}o{k}")
            terms.append((label, Rat(Poly([1]), lin ** k)))
    if tail_degree is not None:
        for j in range(tail_degree + 1):
            label = names.get(("tail", j), f"t{j}")
            terms.append((label, Rat(z ** j)))
    return Ansatz(terms)


def numerator_ansatz(degree: int, den: Poly, prefix: str = "v") -> Ansatz:
    """x_z = Phi(z)/den with Phi = sum v_j z^j, deg Phi <= degree; residue
    elimination relations are derived from the Hermite remainder, which is
    linear in the numerator."""
    z = Poly.x()
    terms = [(f"{prefix}{j}", Rat(z ** j, den)) for j in range(degree + 1)]
    sq = _squarefree_part(den)
    rows = []
    for j in range(degree + 1):
        _, h = hermite_reduce(Rat(z ** j, den))
        if not h.num:
            rows.append([ZERO] * (int(sq.degree)))
            continue
        num = h.num * sq.exact_div(h.den)
        rows.append([num[k] for k in range(int(sq.degree))])
    relations = []
    for k in range(int(sq.degree)):
        rel = {f"{prefix}{j}": rows[j][k] for j in range(degree + 1)
               if rows[j][k]}
        if rel:
            relations.append(rel)
    return Ansatz(terms, relations)


def _squarefree_part(p: Poly) -> Poly:
    return p.exact_div(poly_gcd(p, p.derivative())).monic()


# -- system building ------------------------------------------------------

class GramSystem:
    """Linear constraints on the Gram unknowns mu_ab = B_a.B_b of the free
    (post-substitution) vectors; original lambda_jk are linear in mu."""

    def __init__(self, ansatz: Ansatz, basis: list[str], subst: dict,
                 constraints: dict):
        self.ansatz = ansatz
        self.basis = basis
        self.subst = subst          # name -> {basis name: Element}
        self.constraints = constraints  # tag -> [ {pair: Element} ]
        self.pairs = [(a, b) for i, a in enumerate(basis)
                      for b in basis[i:]]

    def lambda_form(self, j: str, k: str) -> dict:
        """lambda_jk as a linear form in the mu unknowns."""
        out: dict = {}
        for a, ca in self.subst[j].items():
            for b, cb in self.subst[k].items():
                key = (a, b) if (a, b) in set(self.pairs) else (b, a)
                out[key] = out.get(key, ZERO) + ca * cb
        return {p: c for p, c in out.items() if c}


def build_system(ansatz: Ansatz) -> GramSystem:
    names = ansatz.names
    basis, subst = _solve_relations(names, ansatz.relations)
    funcs = {}
    for a in basis:
        f = Rat(Poly([]))
        for name, r in ansatz.terms:
            c = subst[name].get(a)
            if c:
                f = f + r * c
        funcs[a] = f
    Pb = [funcs[a] for a in basis]
    constraints = {
        "conformal": _collect_product_equations(basis, Pb),
        "isotropic": _collect_product_equations(
            basis, [f.derivative() for f in Pb]),
    }
    return GramSystem(ansatz, basis, subst, constraints)


def _solve_relations(names: list[str], relations: list):
    """Gaussian elimination of the vector relations: expressed[name] =
    combination of free names."""
    idx = {n: i for i, n in enumerate(names)}
    rows = []
    for rel in relations:
        row = [ZERO] * len(names)
        for n, c in rel.items():
            row[idx[n]] = c
        rows.append(row)
    pivots = {}
    r = 0
    for col in range(len(names)):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [c * inv for c in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [ci - f * cr for ci, cr in zip(rows[i], rows[r])]
        pivots[col] = r
        r += 1
    basis = [n for i, n in enumerate(names) if i not in pivots]
    subst = {}
    for i, n in enumerate(names):
        if i not in pivots:
            subst[n] = {n: ONE}
        else:
            row = rows[pivots[i]]
            subst[n] = {names[j]: -row[j] for j in range(len(names))
                        if j != i and row[j]}
    return basis, subst


def _collect_product_equations(basis: list[str], funcs: list[Rat]):
    """Equations from sum_{a,b} f_a f_b mu_ab = 0: clear to the common
    denominator and collect polynomial coefficients."""
    nz = [(a, f) for a, f in zip(basis, funcs) if f]
    dc = Poly([1])
    for _, f in nz:
        dc = dc * f.den.exact_div(poly_gcd(dc, f.den))
    nums = {a: f.num * dc.exact_div(f.den) for a, f in nz}
    coeff: dict[int, dict] = {}
    done = set()
    for i, (a, _) in enumerate(nz):
        for b, _f in nz[i:]:
            fac = ONE if a == b else Element(2)
            prod = nums[a] * nums[b]
            pair = (a, b)
            done.add(pair)
            for k in range(int(prod.degree) + 1):
                c = prod[k]
                if c:
                    coeff.setdefault(k, {})[pair] = \
                        coeff.get(k, {}).get(pair, ZERO) + fac * c
    return [eq for _, eq in sorted(coeff.items())]


# -- solving --------------------------------------------------------------

class GramSolution:
    def __init__(self, system: GramSystem, particular: dict,
                 nullspace: list):
        self.system = system
        self.particular = particular    # pair -> Element
        self.nullspace = nullspace      # [ {pair: Element} ]

    @property
    def dimension(self) -> int:
        return len(self.nullspace)

    def mu(self, a: str, b: str) -> Element:
        key = (a, b) if (a, b) in self.particular else (b, a)
        return self.particular[key]

    def evaluate(self, form: dict):
        """(value on particular solution, values on nullspace basis)."""
        def val(assign):
            out = ZERO
            for p, c in form.items():
                key = p if p in assign else (p[1], p[0])
                out = out + c * assign.get(key, ZERO)
            return out
        return val(self.particular), [val(v) for v in self.nullspace]

    def family_constant(self, form: dict):
        """Value of a linear functional if constant on the whole family."""
        v0, vs = self.evaluate(form)
        if any(vs):
            return None
        return v0

    def lambda_value(self, j: str, k: str, strict: bool = False) -> Element:
        """lambda_jk on the particular representative.  With ``strict`` the
        value must be constant on the whole solution family."""
        v0, vs = self.evaluate(self.system.lambda_form(j, k))
        if strict and any(vs):
            raise GramError(f"lambda[{j},{k}] is not determined")
        return v0

    def mu_matrix(self) -> list:
        return [[self.mu(a, b) for b in self.system.basis]
                for a in self.system.basis]

    def lambda_matrix(self) -> list[list[Element]]:
        names = self.system.ansatz.names
        return [[self.lambda_value(j, k) for k in names] for j in names]


def _eliminate(rows: list, n: int) -> tuple[dict, list]:
    """In-place RREF of [coefficients | rhs] rows; Inconsistent on 0 = c."""
    r = 0
    pivots = {}
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [c * inv for c in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [ci - f * cr for ci, cr in zip(rows[i], rows[r])]
        pivots[col] = r
        r += 1
    for i in range(r, len(rows)):
        if rows[i][-1]:
            raise Inconsistent("inconsistent linear system")
    return pivots, rows


def solve_system(system: GramSystem, pins: dict | None = None,
                 use: tuple = ("conformal", "isotropic"),
                 prefer_minimal_rank: bool = True) -> GramSolution:
    """Exact solution family of the selected constraint groups plus pins.

    Pins are {(j, k): value} on *original* vector names.  Raises
    Inconsistent when the pins contradict the constraints.

    When pins leave a residual one-parameter family, the particular
    representative is normalized (``prefer_minimal_rank``) to a member of
    minimal Gram rank when one exists over the field: the construction
    targets the lowest-dimensional realization, and the rank can jump
    along the family.  The family itself is still reported in full.
    """
    pairs = system.pairs
    pidx = {p: i for i, p in enumerate(pairs)}
    rows = []
    for tag in use:
        for eq in system.constraints[tag]:
            row = [ZERO] * (len(pairs) + 1)
            for p, c in eq.items():
                row[pidx[p]] = c
            rows.append(row)
    pin_rows = []
    for (j, k), v in (pins or {}).items():
        row = [ZERO] * (len(pairs) + 1)
        for p, c in system.lambda_form(j, k).items():
            row[pidx[p]] = c
        row[-1] = v if isinstance(v, Element) else Element(v)
        pin_rows.append(((j, k, row[-1]), row))
    n = len(pairs)
    try:
        pivots, rows = _eliminate(rows + [r for _, r in pin_rows], n)
    except Inconsistent:
        # rerun incrementally to name the first infeasible pin
        acc = list(rows)
        for (j, k, v), row in pin_rows:
            acc.append(row)
            try:
                _eliminate([r[:] for r in acc], n)
            except Inconsistent:
                raise Inconsistent(
                    f"pin {j}*{k} = {v} contradicts the constraint "
                    "system") from None
        raise
    particular = {}
    for col, p in enumerate(pairs):
        particular[p] = rows[pivots[col]][-1] if col in pivots else ZERO
    nullspace = []
    for col, p in enumerate(pairs):
        if col in pivots:
            continue
        vec = {p: ONE}
        for c2, q in enumerate(pairs):
            if c2 in pivots and rows[pivots[c2]][col]:
                vec[q] = -rows[pivots[c2]][col]
        nullspace.append(vec)
    if prefer_minimal_rank and pins and len(nullspace) == 1:
        particular = _minimal_rank_shift(system, particular, nullspace[0])
    return GramSolution(system, particular, nullspace)


def exact_rank(M: list) -> int:
    """Rank of a matrix of field elements, by exact elimination."""
    rows = [list(r) for r in M]
    ncols = len(rows[0]) if rows else 0
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]),
                   None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inverse()
        rows[rank] = [c * inv for c in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [ci - f * cr
                           for ci, cr in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _minimal_rank_shift(system, particular, direction):
    """Shift the particular solution along a one-dimensional residual
    family to a point of minimal Gram rank, when such a point exists over
    the field.  The rank-drop locus is cut out by the vanishing of the
    maximal minors of the pencil M0 + t M1; candidate parameters are the
    exact roots of one numerically independent minor, verified by exact
    rank computation."""
    basis = system.basis
    def mat(assign):
        out = []
        for a in basis:
            row = []
            for b in basis:
                key = (a, b) if (a, b) in assign else (b, a)
                row.append(assign.get(key, ZERO))
            out.append(row)
        return out
    M0, M1 = mat(particular), mat(direction)
    A0 = np.array([[complex(c) for c in r] for r in M0])
    A1 = np.array([[complex(c) for c in r] for r in M1])
    rng = np.random.default_rng(7)
    tg = complex(rng.normal(), rng.normal())
    Ag = A0 + tg * A1
    r_generic = int(np.linalg.matrix_rank(Ag, tol=1e-9))
    if r_generic == 0:
        return particular
    rows = _independent_indices(Ag, r_generic)
    cols = _independent_indices(Ag.T, r_generic)
    t = Poly.x("t")
    pencil = [[Poly([M0[i][j]], "t") + t * M1[i][j] for j in cols]
              for i in rows]
    det = _poly_det(pencil)
    best_rank, best = exact_rank(M0), particular
    for root in _field_roots(det):
        Mt = [[a + root * b for a, b in zip(r0, r1)]
              for r0, r1 in zip(M0, M1)]
        r = exact_rank(Mt)
        if r < best_rank:
            best_rank = r
            best = {p: particular.get(p, ZERO) + root * direction.get(p, ZERO)
                    for p in set(particular) | set(direction)}
    return best


def _independent_indices(A: np.ndarray, r: int) -> list:
    """Indices of r numerically independent rows (greedy projection)."""
    picked: list[int] = []
    basis_vecs = []
    for i in np.argsort(-np.linalg.norm(A, axis=1)):
        v = A[i].astype(complex)
        for b in basis_vecs:
            v = v - np.vdot(b, v) * b
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            picked.append(int(i))
            basis_vecs.append(v / nv)
            if len(picked) == r:
                break
    return sorted(picked)


def _poly_det(M: list) -> Poly:
    """Determinant of a small matrix of polynomials (fraction-free
    Bareiss; all divisions are exact)."""
    n = len(M)
    A = [list(r) for r in M]
    prev = Poly([1], A[0][0].var if n else "t")
    sign = 1
    for k in range(n - 1):
        if not A[k][k]:
            piv = next((i for i in range(k + 1, n) if A[i][k]), None)
            if piv is None:
                return Poly([], prev.var)
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[k][k] * A[i][j]
                           - A[i][k] * A[k][j]).exact_div(prev)
        prev = A[k][k]
    return A[n - 1][n - 1] * sign


def _field_roots(p: Poly) -> list:
    """Roots of a univariate polynomial that lie in the coefficient field,
    found by numeric root extraction plus exact verification."""
    if (not p) or p.degree < 1:
        return []
    g = poly_gcd(p, p.derivative())
    sf = p.exact_div(g) if g.degree > 0 else p
    cs = [complex(c) for c in sf.coeffs]
    roots = np.roots(list(reversed(cs)))
    out = []
    seen = set()
    for z0 in roots:
        for cand in _snap_to_field(z0):
            key = repr(cand)
            if key in seen:
                continue
            if not p(cand):
                seen.add(key)
                out.append(cand)
                break
    return out


def _snap_to_field(z0: complex):
    from fractions import Fraction
    out = []
    for den in (1, 12, 10 ** 3, 10 ** 6):
        re = Fraction(z0.real).limit_denominator(den)
        im = Fraction(z0.imag).limit_denominator(den)
        cand = Element(re, im)
        if abs(complex(cand) - z0) <= 1e-6 * (1 + abs(z0)):
            out.append(cand)
    return out


def gram_isotropy(system: GramSystem, sol: GramSolution, order: int) -> Rat:
    """x^(order) . x^(order) evaluated on the solved Gram data, as an exact
    rational function (x^(1) = x_z).  Zero iff the surface is isotropic at
    that order."""
    funcs = {}
    for a in system.basis:
        f = Rat(Poly([]))
        for name, r in system.ansatz.terms:
            c = system.subst[name].get(a)
            if c:
                f = f + r * c
        for _ in range(order - 1):
            f = f.derivative()
        funcs[a] = f
    out = Rat(Poly([]))
    basis = system.basis
    for i, a in enumerate(basis):
        for b in basis[i:]:
            m = sol.mu(a, b)
            if not m:
                continue
            fac = m if a == b else m * 2
            out = out + funcs[a] * funcs[b] * fac
    return out


# -- realization ----------------------------------------------------------

@dataclass
class Realization:
    vectors: object          # m x n array (numeric) or list of Element rows
    rank: int
    exact: bool
    error: float
    signature: tuple | None  # (n_plus, n_minus) for real symmetric input
    real_span_dim: int


def realize(A, n: int, tol: float = 1e-10) -> Realization:
    """Vectors b_1..b_m in C^n with bilinear Gram b_i.b_j = A_ij.

    Numeric path: Takagi factorization A = U Sigma U^T via the
    eigendecomposition of conj(A) A with phase correction; rows of
    U Sigma^(1/2).  An exact sequential realization over the coefficient
    field is attempted first and used when it fits in dimension n.
    """
    Ax = _as_matrix(A)
    m = Ax.shape[0]
    if not np.allclose(Ax, Ax.T, atol=1e-12):
        raise GramError("Gram matrix must be symmetric")
    sig = None
    if np.max(np.abs(Ax.imag)) < 1e-14:
        ev = np.linalg.eigvalsh(Ax.real)
        scale = np.max(np.abs(ev)) or 1.0
        sig = (int(np.sum(ev > tol * scale)), int(np.sum(ev < -tol * scale)))
    U, s = _takagi(Ax)
    # rank from the eigenvalues of conj(A)A (= s^2): thresholding s itself
    # would amplify numerical zeros through the square root
    s2max = s[0] ** 2 if s.size else 1.0
    rank = int(np.sum(s ** 2 > max(tol, 1e-11) * s2max))
    s = s.copy()
    s[rank:] = 0.0
    if rank > n:
        raise RankExceedsDimension(f"rank {rank} > ambient dimension {n}")
    B = U[:, :rank] * np.sqrt(s[:rank])[None, :]
    B = np.hstack([B, np.zeros((m, n - rank), dtype=complex)])
    err = float(np.max(np.abs(B @ B.T - Ax)))
    exact_rows = None
    if isinstance(A, (list, tuple)) and A and isinstance(A[0][0], Element):
        try:
            exact_rows = realize_exact(A, n)
        except GramError:
            exact_rows = None
    if exact_rows is not None:
        Bx = np.array([[complex(c) for c in row] for row in exact_rows])
        return Realization(exact_rows, rank, True,
                           float(np.max(np.abs(Bx @ Bx.T - Ax))), sig,
                           _real_span_dim(Bx))
    return Realization(B, rank, False, err, sig, _real_span_dim(B))


def _as_matrix(A) -> np.ndarray:
    if isinstance(A, np.ndarray):
        return A.astype(complex)
    return np.array([[complex(c) for c in row] for row in A])


def _real_span_dim(B: np.ndarray) -> int:
    stacked = np.vstack([B.real, B.imag])
    return int(np.linalg.matrix_rank(stacked, tol=1e-9))


def _takagi(A: np.ndarray):
    """A = U diag(s) U^T for complex symmetric A; U unitary, s >= 0."""
    m = A.shape[0]
    M = np.conj(A) @ A                 # Hermitian PSD, eigenvalues sigma^2
    w, V = np.linalg.eigh(M)
    order = np.argsort(w)[::-1]
    w, V = w[order], V[:, order]
    s = np.sqrt(np.clip(w, 0.0, None))
    U = np.array(V, dtype=complex)
    tol = 1e-10 * (s[0] if s.size and s[0] > 0 else 1.0)
    i = 0
    while i < m:
        j = i
        while j < m and abs(s[j] - s[i]) <= tol * (1 + s[i]):
            j += 1
        if s[i] > tol:
            Vs = V[:, i:j]
            C = Vs.conj().T @ A @ Vs.conj()   # sigma x (symmetric unitary)
            Q = _symmetric_unitary_sqrt(C / s[i])
            U[:, i:j] = Vs @ Q
        i = j
    return U, s


def _symmetric_unitary_sqrt(Y: np.ndarray) -> np.ndarray:
    """Q with Q Q^T = Y for symmetric unitary Y: the commuting real and
    imaginary parts are simultaneously diagonalized by a real orthogonal F,
    so Y = F diag(e^{i theta}) F^T and Q = F diag(e^{i theta/2}) F^T."""
    k = Y.shape[0]
    if k == 1:
        return np.array([[np.exp(0.5j * np.angle(Y[0, 0]))]])
    w, F = np.linalg.eigh(Y.real)
    # within clusters of Re Y, diagonalize Im Y
    i = 0
    while i < k:
        j = i
        while j < k and abs(w[j] - w[i]) <= 1e-9 * (1 + abs(w[i])):
            j += 1
        if j - i > 1:
            sub = F[:, i:j]
            wi, Fi = np.linalg.eigh(sub.T @ Y.imag @ sub)
            F[:, i:j] = sub @ Fi
        i = j
    theta = np.angle(np.diag(F.T @ Y @ F))
    return F @ np.diag(np.exp(0.5j * theta)) @ F.T


# -- exact sequential realization -----------------------------------------

def realize_exact(A, n: int) -> list:
    """Sequential construction of exact vectors with the given bilinear
    Gram, over the coefficient field.  Each new vector solves its linear
    pairing conditions, then fixes the quadratic self-product along
    directions of the solution affine space where the quadratic stays
    rational (isotropic directions, hyperbolic pairs, or a fresh
    orthonormal pair via the two-squares identity, which always succeeds).
    Candidates that would make a later pairing condition unsolvable are
    rejected.  Raises GramError when the construction needs more than n
    coordinates (minimal-dimension exact realizations are obstructed for
    some Gram matrices over the field; retry with a larger n)."""
    m = len(A)
    rows: list[list[Element]] = []
    used = 0
    for t in range(m):
        rhs = [A[t][i] for i in range(t)]
        target = A[t][t]
        chosen = None
        for extra in (0, 1, 2):
            width = used + extra
            if width > n:
                continue
            for vec in _quadric_candidates(rows, rhs, target, width):
                if _acceptable(rows, vec, A, t):
                    chosen = vec
                    break
            if chosen is not None:
                break
        if chosen is None:
            raise GramError(
                f"exact realization does not fit in dimension {n}")
        used = max(used, _top_coord(chosen))
        rows.append(chosen)
    return [row + [ZERO] * (n - len(row)) for row in rows]


def _top_coord(vec) -> int:
    top = 0
    for i, c in enumerate(vec):
        if c:
            top = i + 1
    return top


def _quadric_candidates(rows, rhs, target, width):
    """Exact points x in C^width with x.rows[i] = rhs[i] and x.x = target."""
    t = len(rows)
    mat = [[rows[i][j] if j < len(rows[i]) else ZERO
            for j in range(width)] for i in range(t)]
    part, kernel = _affine_solutions(mat, rhs, width)
    if part is None:
        return
    # q(c) = (part + sum c_j k_j)^2 = target
    q0 = _bilin(part, part)
    lin = [_bilin(part, k) for k in kernel]
    quad = [[_bilin(ki, kj) for kj in kernel] for ki in kernel]
    if q0 == target:
        yield list(part)
    # isotropic direction with nonzero linear coefficient
    for j, k in enumerate(kernel):
        if not quad[j][j] and lin[j]:
            c = (target - q0) / (lin[j] * 2)
            yield [p + c * ki for p, ki in zip(part, k)]
    # hyperbolic pair of isotropic directions
    for i in range(len(kernel)):
        if quad[i][i]:
            continue
        for j in range(len(kernel)):
            if j == i or quad[j][j]:
                continue
            denom = lin[j] + quad[i][j]
            if denom:
                base = q0 + lin[i] * 2
                c = (target - base) / (denom * 2)
                yield [p + ki + c * kj for p, ki, kj in
                       zip(part, kernel[i], kernel[j])]
    # orthogonal pair with equal self-products: two-squares identity
    # alpha^2 + beta^2 = c solved by alpha = (c+1)/2, beta = -i(c-1)/2
    for i in range(len(kernel)):
        if not quad[i][i] or lin[i]:
            continue
        for j in range(i + 1, len(kernel)):
            if lin[j] or quad[i][j] or quad[j][j] != quad[i][i]:
                continue
            c = (target - q0) / quad[i][i]
            alpha = (c + 1) / 2
            beta = (c - 1) * Element(0, -1) / 2
            yield [p + alpha * ki + beta * kj for p, ki, kj in
                   zip(part, kernel[i], kernel[j])]


def _acceptable(rows, vec, A, t) -> bool:
    """A candidate for the t-th vector is safe when it is independent of
    the previous ones, or dependent in a way every later pairing row of A
    agrees with."""
    width = max([len(vec)] + [len(r) for r in rows])
    matT = [[r[j] if j < len(r) else ZERO for r in rows]
            for j in range(width)]
    rhs = [vec[j] if j < len(vec) else ZERO for j in range(width)]
    coeffs, _ = _affine_solutions(matT, rhs, len(rows))
    if coeffs is None:
        return True
    for s in range(t + 1, len(A)):
        combo = ZERO
        for i, c in enumerate(coeffs):
            if c:
                combo = combo + c * A[s][i]
        if combo != A[s][t]:
            return False
    return True


def _affine_solutions(mat, rhs, width):
    """Particular solution and kernel basis of mat x = rhs over the field."""
    t = len(mat)
    aug = [list(mat[i]) + [rhs[i]] for i in range(t)]
    pivots = {}
    r = 0
    for col in range(width):
        piv = next((i for i in range(r, t) if aug[i][col]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = aug[r][col].inverse()
        aug[r] = [c * inv for c in aug[r]]
        for i in range(t):
            if i != r and aug[i][col]:
                f = aug[i][col]
                aug[i] = [ci - f * cr for ci, cr in zip(aug[i], aug[r])]
        pivots[col] = r
        r += 1
    for i in range(r, t):
        if aug[i][-1]:
            return None, None
    part = [aug[pivots[c]][-1] if c in pivots else ZERO
            for c in range(width)]
    kernel = []
    for col in range(width):
        if col in pivots:
            continue
        vec = [ZERO] * width
        vec[col] = ONE
        for c2 in range(width):
            if c2 in pivots and aug[pivots[c2]][col]:
                vec[c2] = -aug[pivots[c2]][col]
        kernel.append(vec)
    return part, kernel


def _bilin(u, v) -> Element:
    out = ZERO
    for a, b in zip(u, v):
        if a and b:
            out = out + a * b
    return out


# -- surface assembly -----------------------------------------------------

def assemble_surface(vectors, ansatz: Ansatz, n: int | None = None,
                     base_point=None) -> MinimalSurface:
    """MinimalSurface from exact coefficient vectors and the ansatz:
    x_z = sum term(name) * vectors[name], integrated term by term
    (ResidueObstruction propagates if a residue survived)."""
    if isinstance(vectors, (list, tuple)):
        vectors = {name: vec for (name, _), vec in zip(ansatz.terms,
                                                       vectors)}
    dim = n if n is not None else len(next(iter(vectors.values())))
    comps = [Rat(Poly([])) for _ in range(dim)]
    for name, r in ansatz.terms:
        vec = vectors.get(name)
        if vec is None:
            continue
        for i in range(dim):
            c = vec[i]
            if not isinstance(c, Element):
                raise GramError("assemble_surface needs exact vectors")
            if c:
                comps[i] = comps[i] + r * c
    F = [rational_integral(c) if c else Rat(Poly([])) for c in comps]
    return MinimalSurface(F, dim, base_point)
