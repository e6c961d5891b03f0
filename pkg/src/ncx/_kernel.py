"""Exact integer/rational kernel: Fourier-Motzkin feasibility with witness
extraction, incremental double description for polyhedral cones, and small
rational linear algebra (rref, rank, null space).

Everything in this module works over exact arithmetic (Python ints and
fractions.Fraction); no floating point.  Rows are integer tuples normalized
to coprime entries, which keeps the hot loops in plain int arithmetic.

This file is also compiled to the ``ncx._speedups`` extension via Cython
(see _speedups.pyx, which textually includes this source), so it must stay
plain-function, import-light Python.
"""

from fractions import Fraction
from math import gcd

REL_EQ = 0
REL_LE = 1
REL_LT = 2

# Safety valve for Fourier-Motzkin row growth; never hit at this package's
# problem sizes (dim <= 5, tens of rows) but guards against runaway inputs.
FM_ROW_LIMIT = 200000


def iprim(v):
    """Scale an integer vector by a positive rational so entries are coprime
    integers.  Sign is preserved; the zero vector is returned unchanged."""
    g = 0
    for c in v:
        if c:
            g = gcd(g, c if c > 0 else -c)
            if g == 1:
                return tuple(v)
    if g == 0 or g == 1:
        return tuple(v)
    return tuple(c // g for c in v)


def qvec_to_ivec(v):
    """Clear denominators of a rational vector and normalize to coprime ints."""
    mult = 1
    for c in v:
        d = c.denominator if isinstance(c, Fraction) else 1
        mult = mult * d // gcd(mult, d)
    out = []
    for c in v:
        if isinstance(c, Fraction):
            out.append(int(c * mult))
        else:
            out.append(int(c) * mult)
    return iprim(out)


def idot(a, b):
    s = 0
    for i in range(len(a)):
        s += a[i] * b[i]
    return s


# ---------------------------------------------------------------------------
# rational row reduction


def rref(rows, n):
    """Reduced row echelon form of a list of length-n Fraction tuples.

    Returns (reduced_rows, pivot_columns); zero rows are dropped.
    """
    mat = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(n):
        piv = -1
        for r in range(rank, len(mat)):
            if mat[r][col] != 0:
                piv = r
                break
        if piv < 0:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        pv = mat[rank][col]
        mat[rank] = [c / pv for c in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [mat[r][k] - f * mat[rank][k] for k in range(n)]
        pivots.append(col)
        rank += 1
        if rank == len(mat):
            break
    return [tuple(r) for r in mat[:rank]], pivots


def rank_int(rows, n):
    """Rank of a list of integer (or Fraction) row vectors of length n."""
    fr = [tuple(Fraction(c) for c in r) for r in rows]
    red, piv = rref(fr, n)
    return len(piv)


def nullspace(rows, n):
    """Primitive integer basis of {x in Q^n : r.x = 0 for every row r}."""
    fr = [tuple(Fraction(c) for c in r) for r in rows if any(r)]
    red, pivots = rref(fr, n)
    pivset = set(pivots)
    basis = []
    for j in range(n):
        if j in pivset:
            continue
        v = [Fraction(0)] * n
        v[j] = Fraction(1)
        for r in range(len(pivots)):
            v[pivots[r]] = -red[r][j]
        basis.append(qvec_to_ivec(v))
    return basis


# ---------------------------------------------------------------------------
# Fourier-Motzkin feasibility with exact witness


def _fm_dedupe(rows):
    # Rows sharing a normal keep only the strongest (smallest rhs; strict
    # beats weak on ties).  Sound: the kept row implies the dropped ones.
    best = {}
    for rel, r in rows:
        key = r[:-1]
        cur = best.get(key)
        if cur is None:
            best[key] = (rel, r)
        else:
            crel, cr = cur
            if r[-1] < cr[-1] or (r[-1] == cr[-1] and rel == REL_LT):
                best[key] = (rel, r)
    return list(best.values())


def fm_feasible(n, eq_rows, le_rows, lt_rows):
    """Exact feasibility of {x in Q^n : eq.x = b, le.x <= b, lt.x < b}.

    Rows are integer tuples of length n+1 (coefficients then rhs).  Returns a
    tuple of Fractions satisfying every row (strict rows strictly), or None
    if the system is infeasible.  Equalities are eliminated by substitution,
    remaining variables by Fourier-Motzkin; the witness is rebuilt by interval
    back-substitution, so a returned point is correct by construction.
    """
    ineqs = [(REL_LE, tuple(r)) for r in le_rows] + [(REL_LT, tuple(r)) for r in lt_rows]

    # equality substitution
    subst = []
    pending = [tuple(r) for r in eq_rows]
    while pending:
        row = pending.pop()
        piv = -1
        for j in range(n):
            if row[j] != 0:
                piv = j
                break
        if piv < 0:
            if row[n] != 0:
                return None
            continue
        if row[piv] < 0:
            row = tuple(-c for c in row)
        row = iprim(row)
        p = row[piv]
        subst.append((piv, row))
        out = []
        for r2 in pending:
            c = r2[piv]
            if c:
                r2 = tuple(p * r2[k] - c * row[k] for k in range(n + 1))
            out.append(r2)
        pending = out
        out2 = []
        for rel, r2 in ineqs:
            c = r2[piv]
            if c:
                r2 = iprim(tuple(p * r2[k] - c * row[k] for k in range(n + 1)))
            out2.append((rel, r2))
        ineqs = out2

    rows = []
    for rel, r in ineqs:
        zero = True
        for j in range(n):
            if r[j]:
                zero = False
                break
        if zero:
            if rel == REL_LE and r[n] < 0:
                return None
            if rel == REL_LT and r[n] <= 0:
                return None
        else:
            rows.append((rel, iprim(r)))
    rows = _fm_dedupe(rows)

    # Fourier-Motzkin elimination
    levels = []
    while True:
        present = []
        for j in range(n):
            for rel, r in rows:
                if r[j]:
                    present.append(j)
                    break
        if not present:
            break
        best_j = -1
        best_score = -1
        for j in present:
            npos = 0
            nneg = 0
            for rel, r in rows:
                if r[j] > 0:
                    npos += 1
                elif r[j] < 0:
                    nneg += 1
            score = npos * nneg
            if best_j < 0 or score < best_score:
                best_j = j
                best_score = score
        j = best_j
        pos = []
        neg = []
        zero = []
        for rel, r in rows:
            if r[j] > 0:
                pos.append((rel, r))
            elif r[j] < 0:
                neg.append((rel, r))
            else:
                zero.append((rel, r))
        levels.append((j, pos + neg))
        newrows = zero
        for relp, rp in pos:
            cp = rp[j]
            for relm, rm in neg:
                cm = rm[j]
                comb = tuple(cp * rm[k] - cm * rp[k] for k in range(n + 1))
                rel = REL_LT if (relp == REL_LT or relm == REL_LT) else REL_LE
                allzero = True
                for k in range(n):
                    if comb[k]:
                        allzero = False
                        break
                if allzero:
                    if rel == REL_LE and comb[n] < 0:
                        return None
                    if rel == REL_LT and comb[n] <= 0:
                        return None
                else:
                    newrows.append((rel, iprim(comb)))
        rows = _fm_dedupe(newrows)
        if len(rows) > FM_ROW_LIMIT:
            raise RuntimeError("Fourier-Motzkin row explosion")

    # feasible: rebuild a witness
    x = [None] * n
    assigned = set()
    for j, _ in levels:
        assigned.add(j)
    for j, _ in subst:
        assigned.add(j)
    for j in range(n):
        if j not in assigned:
            x[j] = Fraction(0)
    for j, lev_rows in reversed(levels):
        lo = None
        lo_strict = False
        hi = None
        hi_strict = False
        for rel, r in lev_rows:
            c = r[j]
            rest = Fraction(r[n])
            for k in range(n):
                if k != j and r[k]:
                    rest -= r[k] * x[k]
            bound = rest / c
            strict = rel == REL_LT
            if c > 0:
                if hi is None or bound < hi:
                    hi = bound
                    hi_strict = strict
                elif bound == hi and strict:
                    hi_strict = True
            else:
                if lo is None or bound > lo:
                    lo = bound
                    lo_strict = strict
                elif bound == lo and strict:
                    lo_strict = True
        if lo is None and hi is None:
            val = Fraction(0)
        elif lo is None:
            val = hi if not hi_strict else hi - 1
        elif hi is None:
            val = lo if not lo_strict else lo + 1
        elif lo == hi:
            val = lo
        else:
            val = (lo + hi) / 2
        x[j] = val
    for j, row in reversed(subst):
        rest = Fraction(row[n])
        for k in range(n):
            if k != j and row[k]:
                rest -= row[k] * x[k]
        x[j] = rest / row[j]
    return tuple(x)


# ---------------------------------------------------------------------------
# double description for polyhedral cones


def _identity_basis(n):
    out = []
    for i in range(n):
        v = [0] * n
        v[i] = 1
        out.append(tuple(v))
    return out


def _solve_simplicial_rays(rowsM, d):
    """Rays of the simplicial cone {v: M v <= 0} for d independent rows:
    columns of -M^{-1}, as primitive integer vectors."""
    # Gauss-Jordan on [M | -I]
    mat = []
    for i in range(d):
        line = [Fraction(c) for c in rowsM[i]]
        line += [Fraction(-1) if j == i else Fraction(0) for j in range(d)]
        mat.append(line)
    for col in range(d):
        piv = -1
        for r in range(col, d):
            if mat[r][col] != 0:
                piv = r
                break
        mat[col], mat[piv] = mat[piv], mat[col]
        pv = mat[col][col]
        mat[col] = [c / pv for c in mat[col]]
        for r in range(d):
            if r != col and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [mat[r][k] - f * mat[col][k] for k in range(2 * d)]
    rays = []
    for j in range(d):
        col = [mat[i][d + j] for i in range(d)]
        rays.append(qvec_to_ivec(col))
    return rays


def _dd_pointed(M, d):
    """Extreme rays of the pointed cone {v in Q^d : M v <= 0} (rank(M) = d).

    Incremental double description with the combinatorial adjacency test
    (valid for pointed cones): rays u, v of the current cone are adjacent iff
    no third ray's active set contains active(u) & active(v).
    """
    if d == 0:
        return []
    m = len(M)
    # greedy independent subset of rows
    I = []
    acc = []
    for i in range(m):
        cand = acc + [tuple(Fraction(c) for c in M[i])]
        red, piv = rref(cand, d)
        if len(piv) > len(acc):
            I.append(i)
            acc = list(red)
        if len(I) == d:
            break
    if len(I) < d:
        raise ValueError("cone not pointed: rank deficiency")
    rays = _solve_simplicial_rays([M[i] for i in I], d)
    processed = list(I)

    def _masks(cur_rays):
        out = []
        for r in cur_rays:
            mk = 0
            for idx in range(len(processed)):
                if idot(M[processed[idx]], r) == 0:
                    mk |= 1 << idx
            out.append(mk)
        return out

    masks = _masks(rays)
    iset = set(I)
    for i in range(m):
        if i in iset:
            continue
        row = M[i]
        s = [idot(row, r) for r in rays]
        pos = [t for t in range(len(rays)) if s[t] > 0]
        if not pos:
            processed.append(i)
            masks = _masks(rays)
            continue
        neg = [t for t in range(len(rays)) if s[t] < 0]
        keep = [t for t in range(len(rays)) if s[t] <= 0]
        new = []
        seen = set()
        for tp in pos:
            for tm in neg:
                common = masks[tp] & masks[tm]
                adjacent = True
                for to in range(len(rays)):
                    if to != tp and to != tm and (masks[to] & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                w = iprim(tuple(s[tp] * rays[tm][q] - s[tm] * rays[tp][q] for q in range(d)))
                if any(w) and w not in seen:
                    seen.add(w)
                    new.append(w)
        rays = [rays[t] for t in keep] + new
        processed.append(i)
        masks = _masks(rays)
    return sorted(set(rays))


def dd_cone(n, le_rows, eq_rows):
    """Generator description of the cone {z in Q^n: le.z <= 0, eq.z = 0}.

    Returns (rays, lineality): primitive integer tuples such that the cone
    equals cone(rays) + span(lineality), with rays the extreme rays of the
    pointed part taken inside the orthogonal complement of the lineality.
    """
    if eq_rows:
        B = nullspace(eq_rows, n)
    else:
        B = _identity_basis(n)
    if not B:
        return [], []
    k = len(B)
    A = []
    for r in le_rows:
        ar = tuple(idot(r, bv) for bv in B)
        if any(ar):
            A.append(iprim(ar))
    A = sorted(set(A))
    if A:
        L2 = nullspace(A, k)
    else:
        L2 = _identity_basis(k)
    lin = []
    for lv in L2:
        z = tuple(sum(lv[j] * B[j][i] for j in range(k)) for i in range(n))
        lin.append(iprim(z))
    if len(L2) == k:
        return [], sorted(lin)
    if L2:
        C2 = nullspace(L2, k)
    else:
        C2 = _identity_basis(k)
    k2 = len(C2)
    M = []
    for r in A:
        mr = iprim(tuple(idot(r, cv) for cv in C2))
        if any(mr):
            M.append(mr)
    rays2 = _dd_pointed(M, k2)
    rays = []
    for v in rays2:
        w = [sum(v[t] * C2[t][j] for t in range(k2)) for j in range(k)]
        z = tuple(sum(w[j] * B[j][i] for j in range(k)) for i in range(n))
        rays.append(iprim(z))
    return sorted(set(rays)), sorted(lin)
