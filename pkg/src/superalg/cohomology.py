"""Degree-graded Chevalley-Eilenberg cohomology H^2(g_minus; g_star).

Cochains are super-alternating multilinear maps from the negative part of a
graded algebra into the whole algebra, stored by their values on canonical
sorted argument words.  The Z-degree of a homogeneous cochain is
deg(target) - sum deg(arguments); the complex splits into independent blocks
by (Z-degree, cochain parity, weight), and every computation below runs block
by block, which keeps the exact eliminations small.

Sign conventions (d^2 = 0 is enforced by tests, any consistent convention
gives the same dimensions):

  (dc)(x_0..x_k) = sum_i (-1)^{i + p(x_i)(p(c) + p(x_0)+..+p(x_{i-1}))}
                     [x_i, c(.. x_i ..)]
                 + sum_{i<j} (-1)^{i+j+p(x_i)p(x_j) + p(x_i) sum_{l<i} p(x_l)
                     + p(x_j) sum_{l<j} p(x_l)} c([x_i,x_j], .. x_i .. x_j ..)
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import Element, LieSuperAlgebra
from .linalg import SpanSolver, SparseMatrix, kernel_basis, primitive_integer_vector, row_space_basis, rref_rows
from .scalars import GaussianRational, ZERO, format_scalar, rational
from .spaces import admissible_words, sort_word

Word = Tuple[int, ...]
CKey = Tuple[Word, int]  # (argument word over negative positions, target index)


class NegativePart:
    """Cached view of the arguments side of the complex."""

    def __init__(self, g: LieSuperAlgebra):
        self.g = g
        self.indices = g.negative_indices()
        self.pos = {k: p for p, k in enumerate(self.indices)}
        self.parities = [g.parity(k) for k in self.indices]
        self.degrees = [g.degree(k) for k in self.indices]
        self.weights = [g.space.basis[k].weight for k in self.indices]
        self.has_weights = all(w is not None for w in self.weights)

    def word_parity(self, word: Word) -> int:
        return sum(self.parities[i] for i in word) % 2

    def word_degree(self, word: Word) -> int:
        return sum(self.degrees[i] for i in word)

    def word_weight(self, word: Word):
        if not self.has_weights:
            return None
        if not word:
            rank = len(self.weights[0]) if self.weights else 0
            return (ZERO,) * rank if self.weights else ()
        rank = len(self.weights[0])
        return tuple(sum(self.weights[i][j] for i in word) for j in range(rank))


def cochain_basis(g: LieSuperAlgebra, neg: NegativePart, k: int, z_degree: int) -> List[CKey]:
    """Canonical basis of C^k in the given Z-degree."""
    out: List[CKey] = []
    for word in admissible_words(neg.parities, k, "exterior"):
        s = neg.word_degree(word)
        targets = g.component_indices(z_degree + s)
        for t in targets:
            out.append((word, t))
    return out


def cochain_block_key(g: LieSuperAlgebra, neg: NegativePart, key: CKey):
    word, t = key
    parity = (g.parity(t) + neg.word_parity(word)) % 2
    wt = neg.word_weight(word)
    tw = g.space.basis[t].weight
    if wt is None or tw is None:
        return (parity, None)
    return (parity, tuple(a - b for a, b in zip(tw, wt)))


SIGN_ACTION_PC = 1  # include p(c) in the action Koszul factor
SIGN_BRACKET_PP = 1  # include p(x_i)p(x_j) in the bracket term


def differential_matrix(
    g: LieSuperAlgebra,
    neg: NegativePart,
    k: int,
    z_degree: int,
    cols: Sequence[CKey],
    rows: Sequence[CKey],
    cochain_parity: int,
) -> SparseMatrix:
    """Matrix of d: C^k -> C^{k+1} between explicit bases (one block)."""
    col_pos: Dict[CKey, int] = {c: i for i, c in enumerate(cols)}
    row_pos: Dict[CKey, int] = {r: i for i, r in enumerate(rows)}
    entries: Dict[Tuple[int, int], object] = {}
    seen_words = {}
    for word, t in rows:
        if word in seen_words:
            seen_words[word].append(t)
        else:
            seen_words[word] = [t]

    def scatter(row_key, col_key, coeff):
        r = row_pos.get(row_key)
        c = col_pos.get(col_key)
        if r is None or c is None:
            return
        key = (r, c)
        nv = entries.get(key, ZERO) + coeff
        if nv:
            entries[key] = nv
        elif key in entries:
            del entries[key]

    for word in seen_words:
        n1 = len(word)
        pref = [0] * n1
        acc = 0
        for i, w in enumerate(word):
            pref[i] = acc
            acc += neg.parities[w]
        # action terms
        for i in range(n1):
            a_pos = word[i]
            a_global = neg.indices[a_pos]
            rest = word[:i] + word[i + 1 :]
            exp = i + neg.parities[a_pos] * ((cochain_parity * SIGN_ACTION_PC) + pref[i])
            sign = -1 if exp % 2 else 1
            # [e_a, b] expansions: contributes entry at rows (word, t)
            for b in range(len(g)):
                col_key = (rest, b)
                if col_key not in col_pos:
                    continue
                for t, cval in g._table.get((a_global, b), {}).items():
                    coeff = cval if sign > 0 else -cval
                    scatter((word, t), col_key, coeff)
        # bracket terms
        for i in range(n1):
            for j in range(i + 1, n1):
                a_pos, b_pos = word[i], word[j]
                pa, pb = neg.parities[a_pos], neg.parities[b_pos]
                val = g._table.get((neg.indices[a_pos], neg.indices[b_pos]), {})
                if not val:
                    continue
                rest = tuple(w for l, w in enumerate(word) if l != i and l != j)
                exp = i + j + pa * pref[i] + pb * pref[j] + (pa * pb * SIGN_BRACKET_PP)
                base_sign = -1 if exp % 2 else 1
                for m_global, gamma in val.items():
                    m_pos = neg.pos.get(m_global)
                    if m_pos is None:
                        continue
                    sorted_word = sort_word((m_pos,) + rest, neg.parities, "exterior")
                    if sorted_word is None:
                        continue
                    new_word, sigma = sorted_word
                    coeff = gamma * base_sign * sigma
                    for t in seen_words[word]:
                        scatter((word, t), (new_word, t), coeff)
    return SparseMatrix(len(rows), len(cols), entries)


class Cochain:
    """A homogeneous k-cochain with explicit coefficients on canonical words."""

    def __init__(self, g: LieSuperAlgebra, k: int, z_degree: int, coeffs: Dict[CKey, object], parity: Optional[int] = None):
        self.g = g
        self.k = k
        self.z_degree = z_degree
        self.coeffs = {key: c for key, c in coeffs.items() if c}
        neg = NegativePart(g)
        parities = set()
        for (word, t) in self.coeffs:
            s = neg.word_degree(word)
            if g.degree(t) != z_degree + s:
                raise ValueError("coefficient violates the Z-degree homogeneity")
            parities.add((g.parity(t) + neg.word_parity(word)) % 2)
        if len(parities) > 1:
            raise ValueError("cochain is not parity homogeneous")
        self.parity = parity if parities == set() else parities.pop()

    def evaluate(self, arg_indices: Sequence[int]) -> Element:
        """Value on g_minus basis arguments given by global indices (any order)."""
        neg = NegativePart(self.g)
        word = tuple(neg.pos[a] for a in arg_indices)
        res = sort_word(word, neg.parities, "exterior")
        if res is None:
            return {}
        canon, sigma = res
        out: Element = {}
        for (w, t), c in self.coeffs.items():
            if w == canon:
                out[t] = -c if sigma < 0 else c
        return out


def coboundary(c: Cochain) -> Cochain:
    """d(c), computed against the canonical basis of C^{k+1} in the same degree."""
    g = c.g
    neg = NegativePart(g)
    cols = sorted(c.coeffs)
    rows = cochain_basis(g, neg, c.k + 1, c.z_degree)
    if c.parity is None:
        return Cochain(g, c.k + 1, c.z_degree, {})
    mat = differential_matrix(g, neg, c.k, c.z_degree, cols, rows, c.parity)
    vec = [c.coeffs[key] for key in cols]
    out = mat.mul_vector(vec)
    coeffs = {rows[i]: v for i, v in enumerate(out) if v}
    return Cochain(g, c.k + 1, c.z_degree, coeffs)


def cochain_action(g: LieSuperAlgebra, h: int, c: Cochain) -> Cochain:
    """The g0-module structure on cochains, evaluated on canonical words:

    (h.c)(x_1..x_k) = [h, c(x_1..x_k)]
        - sum_i (-1)^{p(h)(p(c)+p(x_1)+..+p(x_{i-1}))} c(x_1,..,[h,x_i],..,x_k)
    """
    neg = NegativePart(g)
    ph = g.parity(h)
    pc = c.parity or 0
    out: Dict[CKey, object] = {}

    def add(key, val):
        nv = out.get(key, ZERO) + val
        if nv:
            out[key] = nv
        elif key in out:
            del out[key]

    for (word, t), cval in c.coeffs.items():
        for tt, hv in g._table.get((h, t), {}).items():
            add((word, tt), cval * hv)
    if any(g._table.get((h, neg.indices[p]), {}) for p in range(len(neg.indices))):
        for word in admissible_words(neg.parities, c.k, "exterior"):
            pref = 0
            for i, w in enumerate(word):
                exp = ph * ((SIGN_ACTION_PC * pc) + pref)
                sign = -1 if exp % 2 else 1
                a_global = neg.indices[w]
                for m_global, hv in g._table.get((h, a_global), {}).items():
                    m_pos = neg.pos.get(m_global)
                    if m_pos is None:
                        continue
                    modified = word[:i] + (m_pos,) + word[i + 1 :]
                    res = sort_word(modified, neg.parities, "exterior")
                    if res is None:
                        continue
                    new_word, sigma = res
                    for (w2, t), cval in c.coeffs.items():
                        if w2 == new_word:
                            add((word, t), -hv * cval * sign * sigma)
                pref += neg.parities[w]
    return Cochain(
        g, c.k, c.z_degree, out, parity=(pc + ph) % 2 if c.parity is not None else None
    )


class TruncationShortfall(Exception):
    """The prolong is not deep enough for the requested cohomology degree."""


class Block:
    """All cochain data of one (parity, weight) block in one Z-degree."""

    def __init__(self, key, c1basis, c2basis, c3basis, g, neg, z_degree):
        self.key = key
        self.parity = key[0]
        self.weight = key[1]
        self.c2basis = c2basis
        self.c2pos = {k: i for i, k in enumerate(c2basis)}
        d2 = differential_matrix(g, neg, 2, z_degree, c2basis, c3basis, self.parity)
        self.z2 = kernel_basis(d2)
        d1 = differential_matrix(g, neg, 1, z_degree, c1basis, c2basis, self.parity)
        b2cols = []
        for j in range(len(c1basis)):
            col = [ZERO] * len(c2basis)
            for (r, c), v in d1.entries.items():
                if c == j:
                    col[r] = v
            b2cols.append(col)
        self.b2_solver = SpanSolver(b2cols, len(c2basis))
        self.dim_z2 = len(self.z2)
        self.dim_b2 = self.b2_solver.rank
        residuals = [self.b2_solver.reduce(z) for z in self.z2]
        self.reps = row_space_basis(residuals, len(c2basis))
        self.dim_h2 = len(self.reps)
        self.rep_solver = SpanSolver(self.reps, len(c2basis)) if self.reps else None

    def class_coords(self, vec):
        """Coordinates of [vec] over the representatives, or None if not a class."""
        if not self.reps:
            return [] if not any(self.b2_solver.reduce(vec)) else None
        residual = self.b2_solver.reduce(vec)
        return self.rep_solver.solve(residual)


class DegreeCohomology:
    """H^2 of one Z-degree, split by (parity, weight) blocks."""

    def __init__(self, g: LieSuperAlgebra, z_degree: int):
        if g.truncation is not None and g.truncation < z_degree - 1:
            raise TruncationShortfall(
                f"degree {z_degree} needs components up to {z_degree - 1}, "
                f"truncation is {g.truncation}"
            )
        self.g = g
        self.z_degree = z_degree
        neg = NegativePart(g)
        self.neg = neg
        basis1 = cochain_basis(g, neg, 1, z_degree)
        basis2 = cochain_basis(g, neg, 2, z_degree)
        basis3 = cochain_basis(g, neg, 3, z_degree)
        by_key_1: Dict[tuple, list] = {}
        for key in basis1:
            by_key_1.setdefault(cochain_block_key(g, neg, key), []).append(key)
        by_key_2: Dict[tuple, list] = {}
        for key in basis2:
            by_key_2.setdefault(cochain_block_key(g, neg, key), []).append(key)
        by_key_3: Dict[tuple, list] = {}
        for key in basis3:
            by_key_3.setdefault(cochain_block_key(g, neg, key), []).append(key)
        self.blocks: List[Block] = []
        for key in sorted(by_key_2, key=lambda k: (k[0], str(k[1]))):
            self.blocks.append(
                Block(
                    key,
                    by_key_1.get(key, []),
                    by_key_2[key],
                    by_key_3.get(key, []),
                    g,
                    neg,
                    z_degree,
                )
            )
        self.block_of_key = {b.key: i for i, b in enumerate(self.blocks)}
        self.offsets = []
        total = 0
        for b in self.blocks:
            self.offsets.append(total)
            total += b.dim_h2
        self.dim_h2 = total
        self.dim_z2 = sum(b.dim_z2 for b in self.blocks)
        self.dim_b2 = sum(b.dim_b2 for b in self.blocks)
        self._action_cache: Dict[int, dict] = {}

    def classes(self):
        out = []
        for bi, b in enumerate(self.blocks):
            for ri in range(b.dim_h2):
                out.append((bi, ri))
        return out

    def rep_cochain(self, bi: int, ri: int) -> Cochain:
        b = self.blocks[bi]
        coeffs = {b.c2basis[i]: v for i, v in enumerate(b.reps[ri]) if v}
        return Cochain(self.g, 2, self.z_degree, coeffs, parity=b.parity)

    def global_coords_of(self, bi, vec):
        out = [ZERO] * self.dim_h2
        cc = self.blocks[bi].class_coords(vec)
        if cc is None:
            return None
        for i, v in enumerate(cc):
            out[self.offsets[bi] + i] = v
        return out

    def _shifted_key(self, key, h):
        ph = self.g.parity(h)
        wh = self.g.space.basis[h].weight
        parity = (key[0] + ph) % 2
        if key[1] is None or wh is None:
            return (parity, key[1])
        return (parity, tuple(a + b for a, b in zip(key[1], wh)))

    def action_matrix(self, h: int) -> dict:
        """Sparse global matrix of the induced action of basis vector h on H^2."""
        if h in self._action_cache:
            return self._action_cache[h]
        entries: Dict[Tuple[int, int], object] = {}
        for bi, b in enumerate(self.blocks):
            if not b.dim_h2:
                continue
            tkey = self._shifted_key(b.key, h)
            ti = self.block_of_key.get(tkey)
            for ri in range(b.dim_h2):
                c = self.rep_cochain(bi, ri)
                hc = cochain_action(self.g, h, c)
                if not hc.coeffs:
                    continue
                if ti is None:
                    raise ValueError("action image leaves the computed blocks")
                tb = self.blocks[ti]
                vec = [ZERO] * len(tb.c2basis)
                for k2, v in hc.coeffs.items():
                    vec[tb.c2pos[k2]] = v
                cc = tb.class_coords(vec)
                if cc is None:
                    raise ValueError("action image is not a cocycle class")
                col = self.offsets[bi] + ri
                for i, v in enumerate(cc):
                    if v:
                        entries[(self.offsets[ti] + i, col)] = v
        self._action_cache[h] = entries
        return entries

    def operator_kernel_on_block(self, bi: int, ops: List[int]):
        """Classes of block bi killed by all listed operators (e.g. raisings)."""
        b = self.blocks[bi]
        if not b.dim_h2:
            return []
        rows = []
        for h in ops:
            mat = self.action_matrix(h)
            for (r, c), v in mat.items():
                if self.offsets[bi] <= c < self.offsets[bi] + b.dim_h2:
                    rows.append((r, c - self.offsets[bi], v, h))
        entries = {}
        row_index = {}
        for (r, c, v, h) in rows:
            key = (h, r)
            if key not in row_index:
                row_index[key] = len(row_index)
            entries[(row_index[key], c)] = v
        mat = SparseMatrix(max(len(row_index), 1), b.dim_h2, entries)
        return row_space_basis(kernel_basis(mat), b.dim_h2)

    def weight_vectors(self, mode: str = "highest"):
        """Per (weight, parity): the classes killed by all raisings (or lowerings).

        Returns a list of dicts with weight, parity, multiplicity and the
        vectors in block-class coordinates.
        """
        g = self.g
        ops_ids = g.raising if mode == "highest" else g.lowering
        ops = [g.index(s) for s in ops_ids]
        out = []
        for bi, b in enumerate(self.blocks):
            if not b.dim_h2:
                continue
            vecs = self.operator_kernel_on_block(bi, ops) if ops else [
                [rational(1) if i == j else ZERO for i in range(b.dim_h2)]
                for j in range(b.dim_h2)
            ]
            if vecs:
                out.append(
                    {
                        "block": bi,
                        "weight": b.weight,
                        "parity": b.parity,
                        "count": len(vecs),
                        "vectors": vecs,
                    }
                )
        return out

    def even_weight_vectors(self, mode: str = "highest"):
        """Weight vectors with respect to the even part of the raising set only."""
        g = self.g
        ops_ids = g.raising if mode == "highest" else g.lowering
        ops = [g.index(s) for s in ops_ids if g.parity(g.index(s)) == 0]
        out = []
        for bi, b in enumerate(self.blocks):
            if not b.dim_h2:
                continue
            vecs = self.operator_kernel_on_block(bi, ops) if ops else []
            if vecs:
                out.append(
                    {
                        "block": bi,
                        "weight": b.weight,
                        "parity": b.parity,
                        "count": len(vecs),
                        "vectors": vecs,
                    }
                )
        return out


def apply_i_cochain(g: LieSuperAlgebra, coeffs: Dict[CKey, object]):
    """Post-compose a cochain with multiplication by i, or None off the i-domain."""
    if g.i_op is None:
        return None
    out: Dict[CKey, object] = {}
    for (word, t), c in coeffs.items():
        img = g.i_op.get(t)
        if img is None:
            return None
        for tt, v in img.items():
            key = (word, tt)
            nv = out.get(key, ZERO) + c * v
            if nv:
                out[key] = nv
            elif key in out:
                del out[key]
    return out


def i_pairing(deg: DegreeCohomology, mode: str = "highest"):
    """Partition the weight-vector classes into i-pairs and leftovers.

    With a total i operator (realifications) the pairing is literal: the
    induced complex structure on H^2 matches each weight class with its i
    image.  For a partial operator (real forms) the detection is module
    theoretic: each weight space is paired through a non-scalar element of
    the commutant of the g0 action on the submodule it generates; weight
    classes on which the commutant acts by scalars stay unpaired (their
    module is of real type and stays irreducible after complexification).
    """
    g = deg.g
    if g.i_op is None:
        raise ValueError("algebra carries no i operator")
    total = all(k in g.i_op for k in range(len(g)))
    wvs = deg.weight_vectors(mode)
    pairs = []
    unpaired = []
    undetermined = []
    for entry in wvs:
        bi = entry["block"]
        b = deg.blocks[bi]
        hw = entry["vectors"]
        nhw = len(hw)
        hw_solver = SpanSolver(hw, b.dim_h2)

        def label(j):
            return {
                "degree": deg.z_degree,
                "weight": _fmt_weight(b.weight),
                "parity": b.parity,
                "index": j,
            }

        if total:
            def image_of(j):
                vec = _class_to_c2(deg, bi, hw[j])
                ivec = apply_i_cochain(g, vec)
                cc = b.class_coords(_c2_to_vec(deg, bi, ivec))
                sol = hw_solver.solve(cc) if cc is not None else None
                if sol is None:
                    raise ValueError("i image left the weight-vector space")
                return sol

            p, u, und = _greedy_pairs(nhw, image_of, label)
        else:
            p, u, und = _commutant_pairs(deg, bi, hw, label)
        pairs += p
        unpaired += u
        undetermined += und
    return {
        "degree": deg.z_degree,
        "pair_count": len(pairs),
        "pairs": [list(pp) for pp in pairs],
        "unpaired": unpaired,
        "undetermined": undetermined,
        "mode": "total" if total else "commutant",
    }


def _commutant_pairs(deg: DegreeCohomology, bi: int, hw, label):
    """Pair weight classes through the commutant of g0 on their submodule."""
    g = deg.g
    n = deg.dim_h2
    mats = [deg.action_matrix(h) for h in g.component_indices(0)]
    gvecs = []
    for v in hw:
        gv = [ZERO] * n
        for i, val in enumerate(v):
            gv[deg.offsets[bi] + i] = val
        gvecs.append(gv)
    M = generated_submodule(deg, gvecs, mats)
    m = len(M)
    msolver = SpanSolver(M, n)
    # parity of each module basis vector, read off its block support
    par = []
    for vec in M:
        ps = set()
        for pos, val in enumerate(vec):
            if val:
                for bj, block in enumerate(deg.blocks):
                    if deg.offsets[bj] <= pos < deg.offsets[bj] + block.dim_h2:
                        ps.add(block.parity)
        par.append(ps.pop() if len(ps) == 1 else None)
    # restricted action matrices
    acts = []
    for mat in mats:
        A = {}
        for j, vec in enumerate(M):
            img = _mat_vec(mat, vec, n)
            sol = msolver.solve(img)
            if sol is None:
                raise ValueError("generated module is not action closed")
            for i, val in enumerate(sol):
                if val:
                    A[(i, j)] = val
        acts.append(A)
    # parity-even commutant: unknowns X[(r,c)] with par r == par c
    slots = [
        (r, c)
        for r in range(m)
        for c in range(m)
        if par[r] is not None and par[r] == par[c]
    ]
    slot_pos = {rc: q for q, rc in enumerate(slots)}
    rows = []
    for A in acts:
        for r in range(m):
            for c in range(m):
                row = {}
                for k in range(m):
                    v1 = A.get((r, k))
                    if v1 and (k, c) in slot_pos:
                        q = slot_pos[(k, c)]
                        row[q] = row.get(q, ZERO) + v1
                    v2 = A.get((k, c))
                    if v2 and (r, k) in slot_pos:
                        q = slot_pos[(r, k)]
                        row[q] = row.get(q, ZERO) - v2
                row = {q: v for q, v in row.items() if v}
                if row:
                    rows.append(row)
    entries = {}
    for ridx, row in enumerate(rows):
        for q, v in row.items():
            entries[(ridx, q)] = v
    comm = kernel_basis(SparseMatrix(max(len(rows), 1), len(slots), entries))
    # restrict the commutant to the weight space
    nhw = len(hw)
    wcoords = [msolver.solve(gv) for gv in gvecs]
    if any(w is None for w in wcoords):
        return [], [], [label(j) for j in range(nhw)]
    wsolver = SpanSolver(wcoords, m)
    restricted = []
    for X in comm:
        matX = {}
        for q, v in enumerate(X):
            if v:
                matX[slots[q]] = v
        ok = True
        rows_w = []
        for w in wcoords:
            img = [ZERO] * m
            for (r, c), v in matX.items():
                if w[c]:
                    img[r] = img[r] + v * w[c]
            sol = wsolver.solve(img)
            if sol is None:
                ok = False
                break
            rows_w.append(sol)
        if ok:
            restricted.append(rows_w)  # nhw x nhw matrix, rows = images
    # pair each direction with a commutant image independent of what is used
    pairs = []
    unpaired = []
    used: list = []
    for j in range(nhw):
        unit = [rational(1) if i == j else ZERO for i in range(nhw)]
        if used and SpanSolver(used, nhw).contains(unit):
            continue
        partner = None
        for R in restricted:
            img = list(R[j])
            if not any(img):
                continue
            test = used + [unit]
            if not SpanSolver(test, nhw).contains(img):
                partner = img
                break
        if partner is None:
            unpaired.append(label(j))
            used.append(unit)
        else:
            pairs.append((label(j), {"partner_combination": _fmt_scalar_list(partner)}))
            used.append(unit)
            used.append(partner)
    return pairs, unpaired, []


def _expand_hw(hw, j):
    return hw[j]


def _greedy_pairs(nhw, image_of, label):
    """Pair basis directions with their i-images, tracking the used span."""
    pairs = []
    unpaired = []
    undetermined = []
    used: list = []
    for j in range(nhw):
        unit = [rational(1) if i == j else ZERO for i in range(nhw)]
        if used and SpanSolver(used, nhw).contains(unit):
            continue
        img = image_of(j)
        if img is None:
            undetermined.append(label(j))
            used.append(unit)
            continue
        if not any(img):
            unpaired.append(label(j))
            used.append(unit)
            continue
        pairs.append((label(j), {"partner_combination": _fmt_scalar_list(img)}))
        used.append(unit)
        used.append(img)
    return pairs, unpaired, undetermined


def _class_to_c2(deg: DegreeCohomology, bi: int, class_vec):
    """Lift class coordinates to a representative's C^2 coefficient dict."""
    b = deg.blocks[bi]
    out = {}
    for i, coef in enumerate(class_vec):
        if not coef:
            continue
        for pos, v in enumerate(b.reps[i]):
            if v:
                key = b.c2basis[pos]
                nv = out.get(key, ZERO) + coef * v
                if nv:
                    out[key] = nv
                elif key in out:
                    del out[key]
    return out


def _c2_to_vec(deg: DegreeCohomology, bi: int, coeffs):
    b = deg.blocks[bi]
    vec = [ZERO] * len(b.c2basis)
    if coeffs is None:
        return vec
    for key, v in coeffs.items():
        vec[b.c2pos[key]] = v
    return vec


def _fmt_weight(w, sign: int = 1):
    if w is None:
        return None
    out = []
    for x in w:
        if isinstance(x, GaussianRational):
            if x.im:
                out.append(format_scalar(x * sign))
                continue
            x = x.re
        num = int(x.numerator) if hasattr(x, "numerator") else int(x)
        den = int(x.denominator) if hasattr(x, "denominator") else 1
        num *= sign
        out.append(num if den == 1 else f"{num}/{den}")
    return out


def _fmt_scalar_list(vec):
    from .scalars import format_scalar

    return [format_scalar(v) for v in vec]


# -- submodule structure -------------------------------------------------------


def _mat_mul(a: dict, b: dict, n: int) -> dict:
    bt: Dict[int, list] = {}
    for (r, c), v in b.items():
        bt.setdefault(r, []).append((c, v))
    out: Dict[Tuple[int, int], object] = {}
    for (r, c), v in a.items():
        for (c2, w) in bt.get(c, ()):  # a[r,c] b[c,c2]
            key = (r, c2)
            nv = out.get(key, ZERO) + v * w
            if nv:
                out[key] = nv
            elif key in out:
                del out[key]
    return out


def _mat_vec(mat: dict, vec, n: int):
    out = [ZERO] * n
    for (r, c), v in mat.items():
        if vec[c]:
            out[r] = out[r] + v * vec[c]
    return out


def generated_submodule(deg: DegreeCohomology, vectors, mats):
    """Closure of the span of the vectors under the action matrices."""
    n = deg.dim_h2
    basis = row_space_basis(vectors, n)
    while True:
        new = list(basis)
        for v in basis:
            for m in mats:
                img = _mat_vec(m, v, n)
                if any(img):
                    new.append(img)
        nb = row_space_basis(new, n)
        if len(nb) == len(basis):
            return nb
        basis = nb


def action_algebra(deg: DegreeCohomology, cap: int = 6000):
    """Basis of the unital matrix algebra generated by the g0 action on H^2."""
    g = deg.g
    n = deg.dim_h2
    gens = [deg.action_matrix(h) for h in g.component_indices(0)]
    ident = {(i, i): rational(1) for i in range(n)}
    basis_mats = [ident]
    vecs = [{i * n + i: rational(1) for i in range(n)}]
    solver = SpanSolver(vecs, n * n)
    worklist = [ident]
    while worklist:
        m = worklist.pop()
        for gmat in gens:
            prod = _mat_mul(gmat, m, n)
            vec = {r * n + c: v for (r, c), v in prod.items()}
            if not solver.contains(vec):
                basis_mats.append(prod)
                vecs.append(vec)
                solver = SpanSolver(vecs, n * n)
                worklist.append(prod)
                if len(basis_mats) > cap:
                    raise RuntimeError("action algebra closure exceeded the cap")
    return basis_mats


def algebra_radical(basis_mats, n):
    """Dickson: x in rad(A) iff tr(x y) = 0 for every y in the algebra basis."""
    traces = []
    for y in basis_mats:
        row = {}
        for j, x in enumerate(basis_mats):
            t = ZERO
            for (r, c), v in x.items():
                w = y.get((c, r))
                if w:
                    t = t + v * w
            if t:
                row[j] = t
        traces.append(row)
    entries = {}
    for ridx, row in enumerate(traces):
        for j, v in row.items():
            entries[(ridx, j)] = v
    mat = SparseMatrix(max(len(traces), 1), len(basis_mats), entries)
    kern = kernel_basis(mat)
    rad = []
    for k in kern:
        m: Dict[Tuple[int, int], object] = {}
        for j, coef in enumerate(k):
            if coef:
                for rc, v in basis_mats[j].items():
                    nv = m.get(rc, ZERO) + coef * v
                    if nv:
                        m[rc] = nv
                    elif rc in m:
                        del m[rc]
        if m:
            rad.append(m)
    return rad


def socle_series(deg: DegreeCohomology):
    """Ascending chain 0 < S_1 < S_2 < ... = H^2 with S_{k+1}/S_k = socle.

    S_1 = annihilator of rad(A); S_{k+1} = preimage of the socle of the
    quotient, computed as {v : rad . v in S_k}.
    """
    n = deg.dim_h2
    if n == 0:
        return []
    mats = action_algebra(deg)
    rad = algebra_radical(mats, n)
    chain = []
    current: list = []
    while True:
        solver = SpanSolver(current, n) if current else None
        rows = []
        for m in rad:
            for j in range(n):
                unit = [rational(1) if i == j else ZERO for i in range(n)]
                img = _mat_vec(m, unit, n)
                if solver is not None:
                    img = solver.reduce(img)
                rows.append((j, img))
        entries = {}
        ridx = 0
        by_m = {}
        for idx, (j, img) in enumerate(rows):
            mnum = idx // n
            for pos, v in enumerate(img):
                if v:
                    entries[(mnum * n + pos, j)] = v
        mat = SparseMatrix(len(rad) * n if rad else 1, n, entries)
        nxt = row_space_basis(kernel_basis(mat), n)
        if len(nxt) == len(current):
            # no growth: the remaining quotient is semisimple; close the chain
            if len(current) < n:
                chain.append([ _unit_vec(i, n) for i in range(n) ])
            break
        chain.append(nxt)
        current = nxt
        if len(current) == n:
            break
    return chain


def _unit_vec(i, n):
    return [rational(1) if j == i else ZERO for j in range(n)]


def submodule_lattice(deg: DegreeCohomology, mode: str = "highest"):
    """Generated modules of the weight-vector classes plus the socle chain."""
    g = deg.g
    n = deg.dim_h2
    mats = [deg.action_matrix(h) for h in g.component_indices(0)]
    wvs = deg.weight_vectors(mode)
    hw_list = []
    for entry in wvs:
        bi = entry["block"]
        for j, v in enumerate(entry["vectors"]):
            gv = [ZERO] * n
            for i, val in enumerate(v):
                gv[deg.offsets[bi] + i] = val
            hw_list.append(
                {
                    "weight": _fmt_weight(entry["weight"]),
                    "parity": entry["parity"],
                    "index": j,
                    "vector": gv,
                }
            )
    generated = []
    for item in hw_list:
        mod = generated_submodule(deg, [item["vector"]], mats)
        generated.append(mod)
    chain = socle_series(deg)
    # weight-vector content of each node
    def hw_content(subspace):
        solver = SpanSolver(subspace, n)
        content = {}
        for item, mod in zip(hw_list, generated):
            if solver.contains(item["vector"]):
                key = (str(item["weight"]), item["parity"])
                content[key] = content.get(key, 0) + 1
        return {f"{k[0]}|parity{k[1]}": v for k, v in sorted(content.items())}

    nodes = []
    seen = []
    for source, sub in (
        [("generated", m) for m in generated] + [("socle", s) for s in chain]
    ):
        canon = row_space_basis(sub, n)
        sig = tuple(tuple((i, str(v)) for i, v in enumerate(row) if v) for row in canon)
        if sig in seen:
            continue
        seen.append(sig)
        nodes.append({"dim": len(canon), "basis": canon, "sources": [source]})
    # containment relations
    contains = []
    for a in range(len(nodes)):
        sa = SpanSolver(nodes[a]["basis"], n)
        for bidx in range(len(nodes)):
            if a == bidx:
                continue
            if nodes[bidx]["dim"] <= nodes[a]["dim"] and all(
                sa.contains(v) for v in nodes[bidx]["basis"]
            ):
                contains.append((a, bidx))
    return {
        "degree": deg.z_degree,
        "weight_vector_count": len(hw_list),
        "nodes": [
            {
                "dim": node["dim"],
                "weight_content": hw_content(node["basis"]),
                "sources": node["sources"],
            }
            for node in nodes
        ],
        "contains": contains,
        "socle_chain_dims": [len(s) for s in chain],
        "socle_chain_content": [hw_content(s) for s in chain],
    }


# -- reports --------------------------------------------------------------------


def format_cochain(g: LieSuperAlgebra, neg: NegativePart, coeffs: Dict[CKey, object]) -> str:
    """Render a 2-cochain in target (x* ^ y*) notation, integer-scaled."""
    if not coeffs:
        return "0"
    items = sorted(coeffs.items(), key=lambda kv: (g.ident(kv[0][1]), kv[0][0]))
    vec = primitive_integer_vector([v for _, v in items])
    parts = []
    for ((word, t), _), c in zip(items, vec):
        if not c:
            continue
        names = [g.ident(neg.indices[p]) for p in word]
        if len(word) == 2 and word[0] == word[1]:
            wedge = f"({names[0]}*)^∧2"
        else:
            wedge = "∧".join(f"{nm}*" for nm in names)
            wedge = f"({wedge})"
        coef = "" if c == 1 else ("-" if c == -1 else f"{c}·")
        term = f"{coef}{g.ident(t)}⊗{wedge}"
        if parts and not term.startswith("-"):
            parts.append("+" + term)
        else:
            parts.append(term)
    return " ".join(parts) if parts else "0"


def wess_zumino_flags(dims: Dict[int, int]) -> Dict[int, bool]:
    """Degree d results are conditional when some lower degree has H^2 != 0."""
    flags = {}
    nonzero_below = False
    for d in sorted(dims):
        flags[d] = nonzero_below
        if dims[d]:
            nonzero_below = True
    return flags


def h2_by_degree(
    g_star: LieSuperAlgebra,
    degrees: Sequence[int],
    *,
    weight_mode: str = "highest",
    even_weights_only: bool = False,
    with_i_pairs: bool = True,
    with_lattice: bool = False,
    weight_label_sign: int = 1,
) -> dict:
    """Per-degree H^2 report for a graded algebra with negative part.

    Returns a JSON-ready dict: dims, representatives, weight-vector tables,
    i-pairs where an i operator exists, submodule data on request.
    """
    neg = NegativePart(g_star)
    degrees = sorted(degrees)
    per_degree = {}
    dims = {}
    objects: Dict[int, DegreeCohomology] = {}
    for d in degrees:
        deg = DegreeCohomology(g_star, d)
        objects[d] = deg
        dims[d] = deg.dim_h2
        reps = []
        for (bi, ri) in deg.classes():
            b = deg.blocks[bi]
            coeffs = {b.c2basis[i]: v for i, v in enumerate(b.reps[ri]) if v}
            reps.append(
                {
                    "weight": _fmt_weight(b.weight, weight_label_sign),
                    "parity": b.parity,
                    "expression": format_cochain(g_star, neg, coeffs),
                }
            )
        entry = {
            "dim_Z2": deg.dim_z2,
            "dim_B2": deg.dim_b2,
            "dim_H2": deg.dim_h2,
            "representatives": reps,
        }
        if g_star.cartan and deg.dim_h2:
            wvs = (
                deg.even_weight_vectors(weight_mode)
                if even_weights_only
                else deg.weight_vectors(weight_mode)
            )
            entry["weight_vectors"] = [
                {
                    "weight": _fmt_weight(deg.blocks[w["block"]].weight, weight_label_sign),
                    "parity": w["parity"],
                    "count": w["count"],
                }
                for w in wvs
            ]
            entry["weight_vector_total"] = sum(w["count"] for w in wvs)
        if with_i_pairs and g_star.i_op is not None and deg.dim_h2:
            entry["i_pairing"] = i_pairing(deg, weight_mode)
        if with_lattice and deg.dim_h2:
            entry["submodules"] = submodule_lattice(deg, weight_mode)
        per_degree[d] = entry
    flags = wess_zumino_flags(dims)
    for d in degrees:
        per_degree[d]["conditional"] = flags[d]
    return {
        "weight_mode": weight_mode,
        "truncation": g_star.truncation,
        "degrees": {str(d): per_degree[d] for d in degrees},
        "h2_dims": {str(d): dims[d] for d in degrees},
    }


def g0_action_on_h2(deg: DegreeCohomology, mode: str = "highest", even_only: bool = False, label_sign: int = 1) -> dict:
    """Refined weight report: multiplicities split by parity, per weight."""
    wvs = deg.even_weight_vectors(mode) if even_only else deg.weight_vectors(mode)
    by_weight: Dict[str, Dict[int, int]] = {}
    for w in wvs:
        key = str(_fmt_weight(deg.blocks[w["block"]].weight, label_sign))
        by_weight.setdefault(key, {0: 0, 1: 0})[w["parity"]] += w["count"]
    return {
        "degree": deg.z_degree,
        "mode": mode,
        "weights": {
            k: {"even": v[0], "odd": v[1], "multiplicity": f"{v[0]}|{v[1]}"}
            for k, v in sorted(by_weight.items())
        },
    }


def layered_weight_vectors(deg: DegreeCohomology, mode: str = "highest"):
    """Weight-vector counts of the socle-series subquotients.

    For an indecomposable H^2 the plain kernel-of-raisings sees only the
    bottom constituents; counting through the socle layers recovers one
    weight-vector family per irreducible constituent.
    """
    g = deg.g
    n = deg.dim_h2
    if n == 0:
        return []
    chain = socle_series(deg)
    ops_ids = g.raising if mode == "highest" else g.lowering
    ops = [g.index(s) for s in ops_ids]
    mats = {h: deg.action_matrix(h) for h in set(ops) | {g.index(s) for s in g.cartan}}
    all_mats = [deg.action_matrix(h) for h in g.component_indices(0)]
    prev: list = []
    layers = []
    for S in chain:
        prev_solver = SpanSolver(prev, n) if prev else None
        layer_reps = []
        for v in S:
            red = prev_solver.reduce(v) if prev_solver else v
            layer_reps.append(red)
        layer_basis = row_space_basis(layer_reps, n)
        if not layer_basis:
            prev = S
            continue
        lsolver = SpanSolver(layer_basis, n)
        m = len(layer_basis)

        def act(h, vec):
            img = _mat_vec(mats[h], vec, n)
            if prev_solver:
                img = prev_solver.reduce(img)
            return lsolver.solve(img)

        # block structure: each layer basis vector sits in one (parity, weight) block
        keys = []
        for v in layer_basis:
            key = None
            for bj, block in enumerate(deg.blocks):
                lo = deg.offsets[bj]
                if any(v[lo : lo + block.dim_h2]):
                    key = (block.parity, block.weight)
                    break
            keys.append(key)
        by_key: Dict[tuple, list] = {}
        for j, key in enumerate(keys):
            by_key.setdefault(key, []).append(j)
        layer_entry = []
        for key in sorted(by_key, key=lambda k: (k[0], str(k[1]))):
            members = by_key[key]
            rows = []
            for h in ops:
                for j in members:
                    sol = act(h, layer_basis[j])
                    if sol is None:
                        raise ValueError("socle layer is not action stable")
                    rows.append((h, j, sol))
            entries = {}
            ridx = {}
            for (h, j, sol) in rows:
                for pos, val in enumerate(sol):
                    if val:
                        rkey = (h, pos)
                        if rkey not in ridx:
                            ridx[rkey] = len(ridx)
                        entries[(ridx[rkey], members.index(j))] = val
            mat = SparseMatrix(max(len(ridx), 1), len(members), entries)
            kern = row_space_basis(kernel_basis(mat), len(members)) if ops else [
                _unit_vec(i, len(members)) for i in range(len(members))
            ]
            if kern:
                layer_entry.append(
                    {
                        "weight": _fmt_weight(key[1]),
                        "parity": key[0],
                        "count": len(kern),
                        "members": members,
                        "vectors": kern,
                    }
                )
        layers.append({"layer_dim": m, "weight_vectors": layer_entry, "basis": layer_basis})
        prev = S
    return layers


def layered_i_pair_count(deg: DegreeCohomology, mode: str = "highest"):
    """i-pairs of the layered weight classes, via the induced i on each layer."""
    g = deg.g
    if g.i_op is None:
        raise ValueError("algebra carries no i operator")
    total = all(k in g.i_op for k in range(len(g)))
    n = deg.dim_h2
    layers = layered_weight_vectors(deg, mode)
    if not total:
        raise ValueError("layered pairing needs a total i operator")
    # global matrix of I on H^2
    entries = {}
    for bi, b in enumerate(deg.blocks):
        for ri in range(b.dim_h2):
            coeffs = _class_to_c2(deg, bi, _unit_vec(ri, b.dim_h2))
            ivec = _c2_to_vec(deg, bi, apply_i_cochain(g, coeffs))
            cc = b.class_coords(ivec)
            for i, v in enumerate(cc):
                if v:
                    entries[(deg.offsets[bi] + i, deg.offsets[bi] + ri)] = v
    pairs = 0
    classes = 0
    chain_prev: list = []
    for layer in layers:
        basis = layer["basis"]
        prev_solver = SpanSolver(chain_prev, n) if chain_prev else None
        lsolver = SpanSolver(basis, n)
        for entry in layer["weight_vectors"]:
            classes += entry["count"]
            used: list = []
            m = len(entry["members"])
            vecs = []
            for kv in entry["vectors"]:
                gv = [ZERO] * n
                for pos, coef in enumerate(kv):
                    if coef:
                        for i, val in enumerate(basis[entry["members"][pos]]):
                            gv[i] = gv[i] + coef * val
                vecs.append(gv)
            vsolver = SpanSolver(vecs, n)
            for j, gv in enumerate(vecs):
                unit = _unit_vec(j, len(vecs))
                if used and SpanSolver(used, len(vecs)).contains(unit):
                    continue
                img = _mat_vec(entries, gv, n)
                if prev_solver:
                    img = prev_solver.reduce(img)
                sol = vsolver.solve(img)
                if sol is None or not any(sol):
                    used.append(unit)
                    continue
                pairs += 1
                used.append(unit)
                used.append(sol)
        chain_prev = chain_prev + [v for v in basis]
    return {"degree": deg.z_degree, "classes": classes, "pairs": pairs}
