"""Cartan and generalized (multi-depth) prolongation of graded Lie superalgebras.

The negative part g_minus (depth at most 2 here) is realized by polynomial
vector fields on coordinates dual to its basis; the degree-0 part is realized
by solving for the unique linear fields reproducing its action.  Positive
components are computed degree by degree:

  g_k = { X of degree k : [X, realization of g_j] lies in g_{k+j} for all j<0 }

which for depth 1 is evaluated literally as an intersection of the image of
X -> ([X, d_1], ..., [X, d_n]) with the tuple space of the previous component,
and for deeper gradings as a kernel of reduction residuals.  The bracket on
the result is the bracket of the realized fields, re-expanded in the computed
basis; closure is checked, never assumed.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from .algebra import Element, LieSuperAlgebra
from .constructors import Action, combine_nonpositive
from .linalg import SpanSolver, SparseMatrix, intersect_subspaces, kernel_basis, rref_rows
from .polyvf import Coords, Polynomial, VectorField, coordinate_field, field_basis_index, fields_of_degree
from .scalars import ZERO, rational
from .spaces import BasisVector, SuperSpace

HALF = rational(1, 2)


class ProlongError(Exception):
    pass


class ProlongResult:
    """A graded algebra spanning degrees -d..truncation plus its field realization."""

    def __init__(self, algebra: LieSuperAlgebra, realization: Dict[str, VectorField], coords: Coords, truncation: int):
        self.algebra = algebra
        self.realization = realization
        self.coords = coords
        self.truncation = truncation

    def component_dims(self):
        g = self.algebra
        lo = min(g.degrees())
        return {d: len(g.component_indices(d)) for d in range(lo, self.truncation + 1)}

    def to_document(self) -> dict:
        doc = self.algebra.to_document()
        doc["format"] = "prolong/1"
        doc["truncation"] = self.truncation
        doc["realization"] = {
            ident: str(field) for ident, field in sorted(self.realization.items())
        }
        return doc


def realize_negative(nonpos: LieSuperAlgebra) -> Tuple[Coords, Dict[int, VectorField]]:
    """Realize g_minus by constant-plus-correction fields on its dual coordinates.

    Degree -1 vectors map to d_a - 1/2 sum (-1)^{p_a p_b} c^z_{ab} x_b d_z,
    degree -2 vectors to d_z; the homomorphism property is verified exactly.
    """
    neg = nonpos.negative_indices()
    if not neg:
        raise ProlongError("no negative part")
    depth = -min(nonpos.degree(k) for k in neg)
    if depth > 2:
        raise ProlongError("only depth <= 2 gradings are supported")
    names = [nonpos.ident(k) for k in neg]
    parities = [nonpos.parity(k) for k in neg]
    degrees = [-nonpos.degree(k) for k in neg]
    field = _scalar_field(nonpos)
    coords = Coords(names, parities, degrees, field=field)
    pos_of = {k: c for c, k in enumerate(neg)}
    fields: Dict[int, VectorField] = {}
    for k in neg:
        a = pos_of[k]
        if nonpos.degree(k) == -2:
            fields[k] = coordinate_field(coords, a)
            continue
        coeffs = {a: coords.one()}
        pa = nonpos.parity(k)
        for b_idx in neg:
            if nonpos.degree(b_idx) != -1:
                continue
            b = pos_of[b_idx]
            pb = nonpos.parity(b_idx)
            val = nonpos._table.get((k, b_idx), {})
            for t, cval in val.items():
                z = pos_of[t]
                # m_{ab} = -1/2 (-1)^{p_a p_b} c_{ab}
                coeff = cval * HALF if (pa and pb) else -(cval * HALF)
                mono = ((b, 1),)
                poly = coeffs.get(z)
                term = Polynomial(coords, {mono: coeff})
                coeffs[z] = term if poly is None else poly + term
        fields[k] = VectorField(coords, {v: p for v, p in coeffs.items() if p})
    # verify the realization is a homomorphism on the negative part
    for i in neg:
        for j in neg:
            lhs = fields[i].bracket(fields[j])
            rhs = VectorField(coords)
            for t, c in nonpos._table.get((i, j), {}).items():
                rhs = rhs + fields[t].scale(c)
            if lhs != rhs:
                raise ProlongError(
                    f"negative realization failed at [{nonpos.ident(i)},{nonpos.ident(j)}]"
                )
    return coords, fields


def _scalar_field(alg: LieSuperAlgebra):
    from .scalars import FIELD_Q, FIELD_QI

    return FIELD_QI if alg.field == "Q(i)" else FIELD_Q


def _field_coords_weights(coords: Coords, nonpos: LieSuperAlgebra, neg: List[int]):
    """Weights of the coordinates (negated) and derivatives (plain), or None."""
    wts = []
    for k in neg:
        w = nonpos.space.basis[k].weight
        if w is None:
            return None
        wts.append(tuple(w))
    return wts


def realize_degree_zero(nonpos: LieSuperAlgebra, coords: Coords, neg_fields: Dict[int, VectorField]):
    """Solve for the linear fields realizing each degree-0 basis vector."""
    neg = nonpos.negative_indices()
    zero = nonpos.component_indices(0)
    cand = fields_of_degree(coords, 0)
    # coordinates of [cand, X_e] stacked over all negative e
    blocks = []
    offsets = []
    total = 0
    for e in neg:
        d = nonpos.degree(e)
        idx, dim = field_basis_index(coords, d)
        blocks.append((e, idx, dim))
        offsets.append(total)
        total += dim

    def stacked(Y: VectorField):
        vec = [ZERO] * total
        for (e, idx, dim), off in zip(blocks, offsets):
            br = Y.bracket(neg_fields[e])
            for v, poly in br.coeffs.items():
                for m, c in poly.terms.items():
                    vec[off + idx[(v, m)]] = c
        return vec

    cand_cols = [stacked(Y) for Y in cand]
    solver = SpanSolver(cand_cols, total)
    out: Dict[int, VectorField] = {}
    for k in zero:
        target = [ZERO] * total
        for (e, idx, dim), off in zip(blocks, offsets):
            val = nonpos._table.get((k, e), {})
            for t, c in val.items():
                f = neg_fields[t]
                for v, poly in f.coeffs.items():
                    for m, cm in poly.terms.items():
                        target[off + idx[(v, m)]] = target[off + idx[(v, m)]] + c * cm
        sol = solver.solve(target)
        if sol is None:
            raise ProlongError(f"degree-0 action of {nonpos.ident(k)} is not realizable")
        Y = VectorField(coords)
        for j, c in enumerate(sol):
            if c:
                Y = Y + cand[j].scale(c)
        out[k] = Y
    # homomorphism check on degree 0 (also catches any ambiguity in the solve)
    for a in zero:
        for b in zero:
            lhs = out[a].bracket(out[b])
            rhs = VectorField(coords)
            for t, c in nonpos._table.get((a, b), {}).items():
                rhs = rhs + out[t].scale(c)
            if lhs != rhs:
                raise ProlongError(
                    f"degree-0 realization failed at [{nonpos.ident(a)},{nonpos.ident(b)}]"
                )
    return out


def _candidate_blocks(coords: Coords, k: int, weights):
    """Split the degree-k candidate fields by (parity, weight) for determinism."""
    from .polyvf import mono_parity

    cand = fields_of_degree(coords, k)
    blocks: Dict[Tuple, List[VectorField]] = {}
    for f in cand:
        (v, poly), = f.coeffs.items()
        (m, _), = poly.terms.items()
        par = (mono_parity(m, coords) + coords.parities[v]) % 2
        if weights is None:
            key = (par,)
        else:
            wt = list(weights[v])
            for var, e in m:
                for j in range(len(wt)):
                    wt[j] = wt[j] - e * weights[var][j]
            key = (par, tuple(wt))
        blocks.setdefault(key, []).append(f)
    return dict(sorted(blocks.items(), key=lambda kv: (kv[0][0], str(kv[0][1:]))))


def prolong(
    nonpos: LieSuperAlgebra,
    max_degree: int,
    *,
    method: str = "auto",
) -> ProlongResult:
    """Extend a nonpositively graded algebra to degrees <= max_degree.

    method "intersection" stacks bracket images and intersects with the tuple
    space of the previous components (depth-1 only); "kernel" solves the
    residual equations directly; "auto" picks intersection for depth 1.
    """
    coords, neg_fields = realize_negative(nonpos)
    zero_fields = realize_degree_zero(nonpos, coords, neg_fields)
    neg = nonpos.negative_indices()
    depth = -min(nonpos.degree(j) for j in neg)
    if method == "auto":
        method = "intersection" if depth == 1 else "kernel"
    if method == "intersection" and depth != 1:
        raise ProlongError("intersection method applies to depth-1 inputs")

    weights = _field_coords_weights(coords, nonpos, neg)

    # realized components by degree: degree -> list of (label, field)
    comp_fields: Dict[int, List[VectorField]] = {}
    comp_ids: Dict[int, List[str]] = {}
    for j in neg:
        d = nonpos.degree(j)
        comp_fields.setdefault(d, []).append(neg_fields[j])
        comp_ids.setdefault(d, []).append(nonpos.ident(j))
    comp_fields[0] = [zero_fields[k] for k in nonpos.component_indices(0)]
    comp_ids[0] = [nonpos.ident(k) for k in nonpos.component_indices(0)]

    solvers: Dict[int, Tuple[dict, int, SpanSolver]] = {}

    def component_solver(d: int):
        """SpanSolver for the realized span of g_d inside W_d coordinates."""
        if d in solvers:
            return solvers[d]
        idx, dim = field_basis_index(coords, d)
        vecs = [f.coordinates(idx, dim) for f in comp_fields.get(d, [])]
        solver = SpanSolver(vecs, dim)
        solvers[d] = (idx, dim, solver)
        return solvers[d]

    for k in range(1, max_degree + 1):
        blocks = _candidate_blocks(coords, k, weights)
        new_fields: List[VectorField] = []
        for key, cand in blocks.items():
            new_fields.extend(
                _prolong_block(cand, neg, nonpos, neg_fields, comp_fields, coords, k, method, component_solver)
            )
        comp_fields[k] = new_fields
        comp_ids[k] = [f"g{k}[{j}]" for j in range(len(new_fields))]
        solvers.pop(k, None)

    return _assemble(nonpos, coords, comp_fields, comp_ids, max_degree)


def _prolong_block(cand, neg, nonpos, neg_fields, comp_fields, coords, k, method, component_solver):
    if not cand:
        return []
    constraints = []  # per negative e: (idx map, dim, reducing solver)
    for e in neg:
        d = k + nonpos.degree(e)
        idx, dim, solver = component_solver(d)
        constraints.append((e, idx, dim, solver))

    if method == "intersection":
        total = sum(dim for _, _, dim, _ in constraints)
        img = []
        for X in cand:
            vec = [ZERO] * total
            off = 0
            for e, idx, dim, _ in constraints:
                br = X.bracket(neg_fields[e])
                for v, poly in br.coeffs.items():
                    for m, c in poly.terms.items():
                        vec[off + idx[(v, m)]] = c
                off += dim
            img.append(vec)
        tuple_space = []
        off = 0
        for e, idx, dim, _ in constraints:
            d = k + nonpos.degree(e)
            for f in comp_fields.get(d, []):
                vec = [ZERO] * total
                for v, poly in f.coeffs.items():
                    for m, c in poly.terms.items():
                        vec[off + idx[(v, m)]] = c
                tuple_space.append(vec)
            off += dim
        meet = intersect_subspaces(img, tuple_space, total)
        back = SpanSolver(img, total)
        sols = []
        for w in meet:
            sol = back.solve(w)
            if sol is None:
                raise ProlongError("intersection pullback failed")
            sols.append(sol)
        return _fields_from_coeffs(sols, cand, coords)

    # kernel method: stack residuals after reducing mod the known spans
    rows: List[dict] = []
    row_count = 0
    cols = []
    for X in cand:
        col = {}
        off = 0
        for e, idx, dim, solver in constraints:
            br = X.bracket(neg_fields[e])
            vec = [ZERO] * dim
            for v, poly in br.coeffs.items():
                for m, c in poly.terms.items():
                    vec[idx[(v, m)]] = c
            residual = solver.reduce(vec)
            for pos, val in enumerate(residual):
                if val:
                    col[off + pos] = val
            off += dim
        cols.append(col)
        row_count = max(row_count, off)
    entries = {}
    for c, col in enumerate(cols):
        for r, v in col.items():
            entries[(r, c)] = v
    mat = SparseMatrix(row_count or 1, len(cand), entries)
    kern = kernel_basis(mat)
    return _fields_from_coeffs(kern, cand, coords)


def _fields_from_coeffs(vectors, cand, coords):
    """Canonicalize coefficient vectors by RREF, then rebuild fields.

    Makes the computed component basis independent of the solution method.
    """
    from .linalg import row_space_basis

    canon = row_space_basis(vectors, len(cand))
    out = []
    for vec in canon:
        X = VectorField(coords)
        for j, c in enumerate(vec):
            if c:
                X = X + cand[j].scale(c)
        out.append(X)
    return out


def _assemble(nonpos, coords, comp_fields, comp_ids, max_degree):
    """Expand all realized brackets in the computed bases and build the algebra."""
    order: List[Tuple[int, int]] = []
    for d in sorted(comp_fields):
        for j in range(len(comp_fields[d])):
            order.append((d, j))
    index_of = {dj: n for n, dj in enumerate(order)}
    basis = []
    all_fields: Dict[int, VectorField] = {}
    for n, (d, j) in enumerate(order):
        ident = comp_ids[d][j]
        f = comp_fields[d][j]
        par = f.parity()
        if par is None:
            par = nonpos.parity(nonpos.index(ident)) if d <= 0 else 0
        basis.append(BasisVector(ident, par, d))
        all_fields[n] = f
    space = SuperSpace(basis)

    solvers = {}

    def solver_for(d):
        if d not in solvers:
            idx, dim = field_basis_index(coords, d)
            vecs = [all_fields[index_of[(d, j)]].coordinates(idx, dim) for j in range(len(comp_fields.get(d, [])))]
            solvers[d] = (idx, dim, SpanSolver(vecs, dim), [index_of[(d, j)] for j in range(len(vecs))])
        return solvers[d]

    brackets: Dict[Tuple[int, int], Element] = {}
    n = len(order)
    for a in range(n):
        da = basis[a].degree
        for b in range(a, n):
            db = basis[b].degree
            d = da + db
            if d < min(comp_fields) or d > max_degree:
                continue
            br = all_fields[a].bracket(all_fields[b])
            if not br:
                continue
            idx, dim, solver, members = solver_for(d)
            vec = br.coordinates(idx, dim)
            sol = solver.solve(vec)
            if sol is None:
                raise ProlongError(
                    f"prolong bracket [{basis[a].id},{basis[b].id}] is not closed in degree {d}"
                )
            val = {members[j]: c for j, c in enumerate(sol) if c}
            if val:
                brackets[(a, b)] = val

    # carry annotations from the input
    i_op = None
    if nonpos.i_op is not None:
        i_op = {}
        for k, img in nonpos.i_op.items():
            src = index_of[(nonpos.degree(k), _position_in_component(nonpos, k))]
            i_op[src] = {
                index_of[(nonpos.degree(t), _position_in_component(nonpos, t))]: c
                for t, c in img.items()
            }
    alg = LieSuperAlgebra(
        space,
        brackets,
        truncation=max_degree,
        cartan=list(nonpos.cartan),
        raising=list(nonpos.raising),
        lowering=list(nonpos.lowering),
        i_op=i_op,
        field=nonpos.field,
        name=(nonpos.name or "g") + "_*",
    )
    if alg.cartan:
        alg.assign_weights()
    realization = {basis[n].id: all_fields[n] for n in range(len(order))}
    return ProlongResult(alg, realization, coords, max_degree)


def _position_in_component(alg: LieSuperAlgebra, k: int) -> int:
    d = alg.degree(k)
    return alg.component_indices(d).index(k)


def cartan_prolong(g_minus1, g0_action: Action, max_degree: int) -> ProlongResult:
    """Prolong of an abelian degree -1 module with a faithful degree-0 action.

    Accepts either a SuperSpace for g_minus1 or a degree -1 abelian algebra
    (whose i_op, if any, rides along).
    """
    from .constructors import abelian_negative

    if isinstance(g_minus1, SuperSpace):
        g_minus = abelian_negative(g_minus1)
    else:
        g_minus = g_minus1
    if not g0_action.is_faithful():
        raise ProlongError("g0 does not act faithfully on g_minus1")
    nonpos = combine_nonpositive(g_minus, g0_action)
    return prolong(nonpos, max_degree, method="intersection")


def generalized_prolong(g_minus: LieSuperAlgebra, g0_action: Action, max_degree: int) -> ProlongResult:
    """Prolong of a graded nilpotent g_minus with g0 inside its derivations."""
    bad = g0_action.check_representation()
    if bad:
        raise ProlongError(f"g0 is not a derivation action: first failure {bad[0]}")
    nonpos = combine_nonpositive(g_minus, g0_action)
    gradefail = nonpos.check_grading()
    if gradefail:
        raise ProlongError(f"action does not preserve the grading: {gradefail[0]}")
    return prolong(nonpos, max_degree, method="kernel")


def prolong_nonpositive(nonpos: LieSuperAlgebra, max_degree: int) -> ProlongResult:
    """Prolong an already-combined nonpositive algebra."""
    depth = -min(nonpos.degree(k) for k in nonpos.negative_indices())
    return prolong(nonpos, max_degree, method="intersection" if depth == 1 else "kernel")


def realize_as_vector_fields(p: ProlongResult) -> Dict[str, VectorField]:
    return dict(p.realization)


def degree_zero_derivations(g_minus: LieSuperAlgebra) -> Action:
    """All grading-preserving superderivations of g_minus, as an Action.

    Solved from the linearized Leibniz constraint, separately for even and odd
    derivations; the result's bracket is the supercommutator of the matrices.
    """
    from .algebra import from_matrices

    n = len(g_minus)
    parities = [g_minus.parity(k) for k in range(n)]
    degrees = [g_minus.degree(k) for k in range(n)]
    gens = []
    for p_d in (0, 1):
        slots = [
            (r, c)
            for r in range(n)
            for c in range(n)
            if degrees[r] == degrees[c] and (parities[r] + parities[c]) % 2 == p_d
        ]
        if not slots:
            continue
        slot_pos = {rc: q for q, rc in enumerate(slots)}
        rows: List[dict] = []
        for i in range(n):
            for j in range(n):
                cij = g_minus._table.get((i, j), {})
                for t in range(n):
                    if degrees[t] != degrees[i] + degrees[j]:
                        continue
                    row: dict = {}

                    def add(slot, coef):
                        # unknowns outside the allowed slots are identically zero
                        q = slot_pos.get(slot)
                        if q is None:
                            return
                        nv = row.get(q, ZERO) + coef
                        if nv:
                            row[q] = nv
                        elif q in row:
                            del row[q]

                    for kk, c in cij.items():
                        add((t, kk), c)
                    for r in range(n):
                        c1 = g_minus._table.get((r, j), {}).get(t)
                        if c1:
                            add((r, i), -c1)
                        c2 = g_minus._table.get((i, r), {}).get(t)
                        if c2:
                            sgn = -1 if (p_d and parities[i]) else 1
                            add((r, j), -sgn * c2)
                    if row:
                        rows.append(row)
        entries = {}
        for ridx, row in enumerate(rows):
            for q, v in row.items():
                entries[(ridx, q)] = v
        mat = SparseMatrix(max(len(rows), 1), len(slots), entries)
        for v in kernel_basis(mat):
            m = {}
            for q, val in enumerate(v):
                if val:
                    m[slots[q]] = val
            gens.append((p_d, m))
    items = []
    for num, (p_d, m) in enumerate(gens):
        items.append((f"D_{num + 1}", p_d, 0, m))
    alg = from_matrices(items, parities, real=(g_minus.field != "Q(i)"), name=f"der0({g_minus.name})")
    return Action(alg, g_minus.space, [m for _, _, _, m in items])


# -- graded alignment ---------------------------------------------------------


def align_graded(
    A: LieSuperAlgebra,
    B: LieSuperAlgebra,
    base_map: Dict[str, Element],
    max_degree: int,
) -> Dict[str, Element]:
    """Extend a degree <= 0 correspondence to a graded isomorphism A -> B.

    base_map sends each A basis id of degree <= 0 to an element of B.  The
    positive part is forced by brackets with g_{-1}; the extended map is then
    verified to be a homomorphism on all in-range pairs.  Raises on failure.
    """
    phi: Dict[int, Element] = {A.index(s): dict(v) for s, v in base_map.items()}
    neg1 = [k for k in range(len(A)) if A.degree(k) == -1]
    for d in range(1, max_degree + 1):
        targets = [k for k in range(len(B)) if B.degree(k) == d]
        rows_dim = None
        cols = []
        for t in targets:
            col = {}
            pos = 0
            for e in neg1:
                img = B.bracket({t: rational(1)}, phi[e])
                for m, c in img.items():
                    col[pos + m] = c
                pos += len(B)
            cols.append(col)
            rows_dim = pos
        if not targets:
            if any(A.degree(k) == d for k in range(len(A))):
                raise ProlongError(f"no degree-{d} targets available in B")
            continue
        solver = SpanSolver(cols, rows_dim)
        for k in [k for k in range(len(A)) if A.degree(k) == d]:
            target_vec = [ZERO] * rows_dim
            pos = 0
            for e in neg1:
                val = A._table.get((k, e), {})
                img: Element = {}
                for t, c in val.items():
                    for m, cm in phi[t].items():
                        nv = img.get(m, ZERO) + c * cm
                        if nv:
                            img[m] = nv
                        elif m in img:
                            del img[m]
                for m, c in img.items():
                    target_vec[pos + m] = c
                pos += len(B)
            sol = solver.solve(target_vec)
            if sol is None:
                raise ProlongError(f"cannot align {A.ident(k)} in degree {d}")
            phi[k] = {targets[j]: c for j, c in enumerate(sol) if c}
    # verify homomorphism property on all in-range pairs
    maxd = max_degree
    mind = min(A.degrees())
    for i in sorted(phi):
        for j in sorted(phi):
            if j < i:
                continue
            dij = A.degree(i) + A.degree(j)
            if dij > maxd or dij < mind:
                continue
            lhs: Element = {}
            for t, c in A._table.get((i, j), {}).items():
                for m, cm in phi[t].items():
                    nv = lhs.get(m, ZERO) + c * cm
                    if nv:
                        lhs[m] = nv
                    elif m in lhs:
                        del lhs[m]
            rhs = B.bracket(phi[i], phi[j])
            if lhs != rhs:
                raise ProlongError(
                    f"alignment is not a homomorphism at [{A.ident(i)},{A.ident(j)}]"
                )
    # injectivity: phi images independent degree by degree
    for d in range(mind, maxd + 1):
        ks = [k for k in sorted(phi) if A.degree(k) == d]
        if not ks:
            continue
        vecs = []
        for k in ks:
            vecs.append({m: c for m, c in phi[k].items()})
        if SpanSolver(vecs, len(B)).rank != len(ks):
            raise ProlongError(f"alignment degenerates in degree {d}")
    return {A.ident(k): v for k, v in phi.items()}
