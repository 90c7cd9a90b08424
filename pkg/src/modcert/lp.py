"""Linear programming with exact rational answers.

Solves run in floating point first (scipy/HiGHS, sparse) for speed; the
basis structure of the float solution is then re-evaluated in exact rational
arithmetic and certified by a matching primal/dual pair. Whenever that
certification fails, an exact two-phase simplex over Fractions with Bland's
rule takes over (with column generation for wide problems), so every number
that leaves this module is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .chains import Chain
from .scores import Pair, ScoreMatrix, trivial_upper_bound
from .subnets import Subnetwork

Row = tuple[dict[int, Fraction], Fraction]  # sparse coeffs, rhs; relation <=


# ---------------------------------------------------------------------------
# exact two-phase simplex (Bland's rule), dense Fractions

def exact_simplex(
    c: Sequence[Fraction],
    rows: Sequence[tuple[dict[int, Fraction], str, Fraction]],
    maximize: bool = True,
):
    """Solve max/min c.x subject to rows (coeffs, rel, rhs) and x >= 0.

    rel is one of "<=", ">=", "==". Returns (status, x, objective, duals);
    duals[i] is meaningful for "<=" rows of a maximization, else None.
    """
    n = len(c)
    zero = Fraction(0)
    one = Fraction(1)

    norm_rows = []
    for coeffs, rel, rhs in rows:
        coeffs = dict(coeffs)
        rhs = Fraction(rhs)
        if rhs < 0:
            coeffs = {j: -v for j, v in coeffs.items()}
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "==": "=="}[rel]
        norm_rows.append((coeffs, rel, rhs))

    m = len(norm_rows)
    slack_idx: dict[int, int] = {}
    art_idx: dict[int, int] = {}
    ncols = n
    for i, (_, rel, _) in enumerate(norm_rows):
        if rel in ("<=", ">="):
            slack_idx[i] = ncols
            ncols += 1
    for i, (_, rel, _) in enumerate(norm_rows):
        if rel in (">=", "=="):
            art_idx[i] = ncols
            ncols += 1
    art_cols = set(art_idx.values())

    T = [[zero] * (ncols + 1) for _ in range(m)]
    basis = [0] * m
    for i, (coeffs, rel, rhs) in enumerate(norm_rows):
        for j, v in coeffs.items():
            T[i][j] = Fraction(v)
        T[i][ncols] = rhs
        if rel == "<=":
            T[i][slack_idx[i]] = one
            basis[i] = slack_idx[i]
        elif rel == ">=":
            T[i][slack_idx[i]] = -one
            T[i][art_idx[i]] = one
            basis[i] = art_idx[i]
        else:
            T[i][art_idx[i]] = one
            basis[i] = art_idx[i]

    def pivot(row, col, obj):
        piv = T[row][col]
        T[row] = [v / piv for v in T[row]]
        prow = T[row]
        for r in range(m):
            if r != row and T[r][col] != 0:
                f = T[r][col]
                T[r] = [a - f * b for a, b in zip(T[r], prow)]
        if obj[col] != 0:
            f = obj[col]
            for j in range(ncols + 1):
                obj[j] -= f * prow[j]
        basis[row] = col

    def run(obj, allowed):
        while True:
            col = -1
            for j in allowed:
                if obj[j] < 0:
                    col = j
                    break
            if col < 0:
                return "optimal"
            row = -1
            best = None
            for r in range(m):
                a = T[r][col]
                if a > 0:
                    ratio = T[r][-1] / a
                    if best is None or ratio < best or (ratio == best and basis[r] < basis[row]):
                        best = ratio
                        row = r
            if row < 0:
                return "unbounded"
            pivot(row, col, obj)

    if art_cols:
        obj1 = [zero] * (ncols + 1)
        for i in art_cols:
            obj1[i] = one
        for r, b in enumerate(basis):
            if obj1[b] != 0:
                f = obj1[b]
                for j in range(ncols + 1):
                    obj1[j] -= f * T[r][j]
        status = run(obj1, list(range(ncols)))
        if status != "optimal" or obj1[-1] != 0:
            return "infeasible", None, None, None
        for r in range(m):
            if basis[r] in art_cols:
                for j in range(ncols):
                    if j not in art_cols and T[r][j] != 0:
                        pivot(r, j, obj1)
                        break

    sense = one if maximize else -one
    obj = [zero] * (ncols + 1)
    for j in range(n):
        obj[j] = -sense * Fraction(c[j])
    for r, b in enumerate(basis):
        if obj[b] != 0:
            f = obj[b]
            for j in range(ncols + 1):
                obj[j] -= f * T[r][j]
    status = run(obj, [j for j in range(ncols) if j not in art_cols])
    if status != "optimal":
        return status, None, None, None

    xfull = [zero] * ncols
    for r, b in enumerate(basis):
        xfull[b] = T[r][-1]
    values = xfull[:n]
    objective = sense * obj[-1]
    duals: list[Fraction | None] = [None] * m
    for i, (_, rel, _) in enumerate(norm_rows):
        if rel == "<=" and maximize:
            duals[i] = obj[slack_idx[i]]
    return "optimal", values, objective, duals


# ---------------------------------------------------------------------------
# exact linear systems (sparse-aware Gaussian elimination)

def solve_exact_system(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Solve dense A x = b exactly; None if inconsistent or underdetermined."""
    rows = [{j: v for j, v in enumerate(row) if v != 0} for row in A]
    ncols = len(A[0]) if A else 0
    return solve_sparse_system(rows, list(b), ncols)


def solve_sparse_system(rows: list[dict[int, Fraction]], rhs: list[Fraction], ncols: int) -> list[Fraction] | None:
    """Solve a sparse exact linear system; pivots chosen to limit fill-in."""
    rows = [dict(r) for r in rows]
    rhs = list(rhs)
    m = len(rows)
    col_rows: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for j in r:
            col_rows.setdefault(j, set()).add(i)
    eliminated_rows: set[int] = set()
    assign_order: list[tuple[int, int]] = []  # (pivot row, pivot col)

    for _ in range(min(m, ncols)):
        # Markowitz-style: pick the available column with fewest rows, then the
        # sparsest row within it
        best = None
        for j, touch in col_rows.items():
            live = [i for i in touch if i not in eliminated_rows]
            if not live:
                continue
            cand = (len(live), j)
            if best is None or cand < best[0:2]:
                best = (len(live), j, live)
        if best is None:
            break
        _, pcol, live = best
        prow = min(live, key=lambda i: (len(rows[i]), i))
        piv = rows[prow][pcol]
        inv = 1 / piv
        rows[prow] = {j: v * inv for j, v in rows[prow].items()}
        rhs[prow] *= inv
        for i in list(col_rows[pcol]):
            if i == prow or i in eliminated_rows:
                continue
            f = rows[i].get(pcol)
            if not f:
                continue
            ri = rows[i]
            for j, v in rows[prow].items():
                nv = ri.get(j, Fraction(0)) - f * v
                if nv == 0:
                    ri.pop(j, None)
                    col_rows.get(j, set()).discard(i)
                else:
                    ri[j] = nv
                    col_rows.setdefault(j, set()).add(i)
            rhs[i] -= f * rhs[prow]
        eliminated_rows.add(prow)
        assign_order.append((prow, pcol))

    solved_cols = {c for _, c in assign_order}
    for i in range(m):
        if i not in eliminated_rows:
            if rows[i]:
                return None  # leftover row with unsolved columns: underdetermined
            if rhs[i] != 0:
                return None  # inconsistent
    if len(solved_cols) < ncols:
        return None
    x = [Fraction(0)] * ncols
    # back-substitute in reverse elimination order
    for prow, pcol in reversed(assign_order):
        acc = rhs[prow]
        for j, v in rows[prow].items():
            if j != pcol:
                acc -= v * x[j]
        x[pcol] = acc
    return x


# ---------------------------------------------------------------------------
# reduce-weights helper: min sum(x) s.t. 0 <= x <= ub, sum over sets >= p

def minimize_totals_exact(
    keys: Sequence[Pair],
    ub: dict[Pair, Fraction],
    constraint_sets: Sequence[frozenset],
    p: Fraction,
) -> dict[Pair, Fraction] | None:
    """Exact minimizer of the covering LP used for weight reduction."""
    keys = list(keys)
    idx = {k: i for i, k in enumerate(keys)}
    nv = len(keys)
    sets = [frozenset(s) for s in constraint_sets]
    if not sets:
        return {k: Fraction(0) for k in keys}

    c = np.ones(nv)
    A = np.zeros((len(sets), nv))
    for r, s in enumerate(sets):
        for k in s:
            A[r, idx[k]] = -1.0
    b = np.full(len(sets), -float(p))
    bounds = [(0.0, float(ub[k])) for k in keys]
    try:
        res = linprog(c, A_ub=A, b_ub=b, bounds=bounds, method="highs")
    except ValueError:
        res = None
    if res is not None and res.success:
        out = _recover_reduce_vertex(keys, ub, sets, p, res.x)
        if out is not None:
            return out

    rows = [({idx[k]: Fraction(1) for k in s}, ">=", p) for s in sets]
    rows += [({idx[k]: Fraction(1)}, "<=", ub[k]) for k in keys]
    status, vals, _, _ = exact_simplex([Fraction(1)] * nv, rows, maximize=False)
    if status != "optimal":
        return None
    return {k: vals[idx[k]] for k in keys}


def _recover_reduce_vertex(keys, ub, sets, p, xf) -> dict[Pair, Fraction] | None:
    tol = 1e-7
    idx = {k: i for i, k in enumerate(keys)}
    fixed: dict[Pair, Fraction] = {}
    free: list[Pair] = []
    for i, k in enumerate(keys):
        if xf[i] <= tol:
            fixed[k] = Fraction(0)
        elif xf[i] >= float(ub[k]) - tol:
            fixed[k] = ub[k]
        else:
            free.append(k)
    if free:
        eqs, rhs = [], []
        for s in sets:
            total = sum(xf[idx[k]] for k in s)
            if total <= float(p) + tol:
                eqs.append({free.index(k): Fraction(1) for k in s if k in free})
                rhs.append(p - sum((fixed[k] for k in s if k in fixed), Fraction(0)))
        if not eqs:
            return None
        sol = solve_sparse_system(eqs, rhs, len(free))
        if sol is None:
            return None
        for k, v in zip(free, sol):
            fixed[k] = v
    for k in keys:
        if fixed[k] < 0 or fixed[k] > ub[k]:
            return None
    for s in sets:
        if sum((fixed[k] for k in s), Fraction(0)) < p:
            return None
    return fixed


# ---------------------------------------------------------------------------
# generic LP surface (max c.x, rows <=, x >= 0)

@dataclass
class LinearProgram:
    """max objective . x subject to sparse rows (coeffs . x <= rhs), x >= 0."""

    objective: list[Fraction]
    rows: list[Row]

    def __post_init__(self):
        for coeffs, _ in self.rows:
            for j in coeffs:
                if j < 0 or j >= len(self.objective):
                    raise ValueError(f"row references unknown variable {j}")


def solve_lp(lp: LinearProgram) -> tuple[list[Fraction], Fraction]:
    """Optimal vertex, exact. Raises ValueError on unbounded problems."""
    if not lp.objective:
        return [], Fraction(0)
    result = _solve_max_leq_exact(lp.objective, lp.rows)
    if result is None:
        raise ValueError("LP is unbounded")
    return result


def _solve_max_leq_exact(obj: Sequence[Fraction], rows: Sequence[Row]):
    """Exact optimum of max obj.x, rows <=, x >= 0; None if unbounded."""
    nv = len(obj)
    zero = Fraction(0)
    if not rows:
        if any(v > 0 for v in obj):
            return None
        return [zero] * nv, zero
    recovered = _float_then_recover(obj, rows)
    if recovered is not None:
        return recovered
    return _column_generation(obj, rows)


def _float_solve(obj, rows):
    nv = len(obj)
    m = len(rows)
    c = np.array([-float(v) for v in obj])
    data, ri, ci = [], [], []
    b = np.zeros(m)
    for i, (coeffs, rhs) in enumerate(rows):
        b[i] = float(rhs)
        for j, v in coeffs.items():
            ri.append(i)
            ci.append(j)
            data.append(float(v))
    A = sparse.csr_matrix((data, (ri, ci)), shape=(m, nv))
    try:
        res = linprog(c, A_ub=A, b_ub=b, bounds=(0, None), method="highs")
    except ValueError:
        return None
    if not res.success:
        return None
    return res


def _float_then_recover(obj, rows):
    res = _float_solve(obj, rows)
    if res is None:
        return None
    xf = res.x
    nv = len(obj)
    m = len(rows)
    bmax = max((abs(float(r[1])) for r in rows), default=1.0)
    tol = 1e-8 * max(1.0, bmax)
    support = [j for j in range(nv) if xf[j] > tol]
    slack = np.array([float(r[1]) for r in rows])
    for i, (coeffs, _) in enumerate(rows):
        slack[i] -= sum(float(v) * xf[j] for j, v in coeffs.items())
    binding = [i for i in range(m) if slack[i] < tol]
    if len(support) != len(binding):
        return None
    if not support:
        if all(Fraction(v) <= 0 for v in obj):
            return [Fraction(0)] * nv, Fraction(0)
        return None

    spos = {j: jj for jj, j in enumerate(support)}
    sysrows = [
        {spos[j]: v for j, v in rows[i][0].items() if j in spos} for i in binding
    ]
    sol = solve_sparse_system(sysrows, [rows[i][1] for i in binding], len(support))
    if sol is None:
        return None
    x = [Fraction(0)] * nv
    for j, v in zip(support, sol):
        if v < 0:
            return None
        x[j] = v
    for coeffs, rhs in rows:
        acc = sum((v * x[j] for j, v in coeffs.items() if x[j] != 0), Fraction(0))
        if acc > rhs:
            return None
    # dual certificate on the same pattern
    bpos = {i: ii for ii, i in enumerate(binding)}
    trows = []
    for j in support:
        trows.append({})
    for i in binding:
        for j, v in rows[i][0].items():
            if j in spos:
                trows[spos[j]][bpos[i]] = v
    y = solve_sparse_system(trows, [Fraction(obj[j]) for j in support], len(binding))
    if y is None or any(v < 0 for v in y):
        return None
    ydense = {i: v for i, v in zip(binding, y)}
    if not _prices_out(obj, rows, ydense):
        return None
    objective = sum((Fraction(obj[j]) * x[j] for j in support), Fraction(0))
    return x, objective


def _prices_out(obj, rows, ydense) -> bool:
    """True iff no column has positive reduced profit under duals ydense."""
    nv = len(obj)
    charge = [Fraction(0)] * nv
    for i, yv in ydense.items():
        if yv == 0:
            continue
        for j, v in rows[i][0].items():
            charge[j] += yv * v
    for j in range(nv):
        if Fraction(obj[j]) > charge[j]:
            return False
    return True


def _column_generation(obj, rows):
    """Exact simplex over an active column set, priced against the full pool."""
    nv = len(obj)
    res = _float_solve(obj, rows)
    if res is not None:
        active = {j for j in range(nv) if res.x[j] > 1e-10}
    else:
        active = set()
    if not active:
        active = {j for j in range(nv) if Fraction(obj[j]) > 0}
        if not active:
            return [Fraction(0)] * nv, Fraction(0)
        active = set(sorted(active)[:50])

    for _round in range(len(obj) + 10):
        cols = sorted(active)
        cmap = {j: jj for jj, j in enumerate(cols)}
        touched_rows = [
            i
            for i, (coeffs, rhs) in enumerate(rows)
            if rhs < 0 or any(j in active for j in coeffs)
        ]
        sub_rows = []
        for i in touched_rows:
            coeffs = {cmap[j]: v for j, v in rows[i][0].items() if j in active}
            sub_rows.append((coeffs, "<=", rows[i][1]))
        status, vals, objective, duals = exact_simplex(
            [Fraction(obj[j]) for j in cols], sub_rows, maximize=True
        )
        if status == "unbounded":
            return None
        if status != "optimal":
            raise RuntimeError(f"exact simplex failed: {status}")
        ydense = {}
        for irow, i in enumerate(touched_rows):
            yv = duals[irow]
            if yv:
                ydense[i] = yv
        # price the full pool; add the most violated columns
        charge = [Fraction(0)] * nv
        for i, yv in ydense.items():
            for j, v in rows[i][0].items():
                charge[j] += yv * v
        violated = [(Fraction(obj[j]) - charge[j], j) for j in range(nv) if j not in active]
        violated = [(g, j) for g, j in violated if g > 0]
        if not violated:
            x = [Fraction(0)] * nv
            for j, v in zip(cols, vals):
                x[j] = v
            return x, objective
        violated.sort(key=lambda t: (-t[0], t[1]))
        for _, j in violated[:100]:
            active.add(j)
    raise RuntimeError("column generation did not converge")


# ---------------------------------------------------------------------------
# certificate combination

@dataclass
class CertComponent:
    """A proven penalized structure ready for linear combination."""

    kind: str  # "chain" | "subnetwork"
    nodes: tuple[int, ...]
    loads: dict[Pair, Fraction]  # signed reduced scores
    penalty: Fraction

    @classmethod
    def from_chain(cls, ch: Chain) -> "CertComponent":
        return cls(kind="chain", nodes=ch.nodes, loads=ch.pairs(), penalty=ch.penalty)

    @classmethod
    def from_subnetwork(cls, sub: Subnetwork, penalty: Fraction) -> "CertComponent":
        return cls(kind="subnetwork", nodes=sub.nodes, loads=dict(sub.scores), penalty=penalty)

    def dedupe_key(self):
        return (self.kind, self.nodes, self.penalty, tuple(sorted(self.loads.items())))


@dataclass
class CombinedCertificate:
    components: tuple[tuple[CertComponent, Fraction], ...]  # (component, lambda)
    trivial_bound: Fraction
    total_penalty: Fraction
    bound: Fraction
    status: str = "gap"
    gap: Fraction | None = None


def combine(
    components: Sequence[CertComponent],
    sm: ScoreMatrix,
    achieved: Fraction | None = None,
) -> CombinedCertificate:
    """Best permissible linear combination of proven components.

    One variable per component, one capacity row per touched pair: the
    lambda-weighted absolute loads may not exceed the magnitude of the pair's
    original score. Exact multipliers, exact bound.
    """
    trivial = trivial_upper_bound(sm)
    comps = list(components)
    if not comps:
        cert = CombinedCertificate(
            components=(), trivial_bound=trivial, total_penalty=Fraction(0), bound=trivial
        )
        _set_status(cert, achieved)
        return cert

    pairs = sorted({q for comp in comps for q in comp.loads})
    pair_row = {q: i for i, q in enumerate(pairs)}
    rows: list[Row] = [({}, abs(sm.score(*q))) for q in pairs]
    for jc, comp in enumerate(comps):
        for q, load in comp.loads.items():
            base = sm.score(*q)
            if load * base < 0:
                raise ValueError(f"component {jc} load on {q} contradicts the score sign")
            rows[pair_row[q]][0][jc] = abs(load)
    objective = [comp.penalty for comp in comps]
    solved = _solve_max_leq_exact(objective, rows)
    if solved is None:
        raise ValueError("combination LP unbounded; some component has empty loads")
    lambdas, total = solved
    cert = CombinedCertificate(
        components=tuple((comp, lam) for comp, lam in zip(comps, lambdas)),
        trivial_bound=trivial,
        total_penalty=total,
        bound=trivial - total,
    )
    _set_status(cert, achieved)
    return cert


def _set_status(cert: CombinedCertificate, achieved: Fraction | None):
    if achieved is not None and cert.bound == achieved:
        cert.status = "optimal-proved"
        cert.gap = Fraction(0)
    else:
        cert.status = "gap"
        cert.gap = None if achieved is None else cert.bound - achieved
