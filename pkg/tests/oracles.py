"""Independent brute-force oracles used to pin expected values in tests.

These deliberately avoid the library's own elimination and enumeration code
paths: the rank oracle is dense fraction-free Gaussian elimination, the
dimension oracles enumerate admissible index words directly.
"""

from itertools import product

from superalg.scalars import rational


def dense_rank_fraction_free(dense):
    """Rank via Bareiss-style fraction-free elimination on a dense copy."""
    m = [list(row) for row in dense]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if m[i][c]:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == nrows:
            break
    return r


def count_admissible_words(parities, k, evens_strict):
    """Count sorted index words of length k over the given parities.

    evens_strict=True counts exterior-type words (even indices distinct, odd
    indices repeatable); False counts symmetric-type words (the flip).
    """
    n = len(parities)
    count = 0
    for word in product(range(n), repeat=k):
        if any(word[i] > word[i + 1] for i in range(k - 1)):
            continue
        ok = True
        for i in range(k - 1):
            if word[i] == word[i + 1]:
                odd = parities[word[i]] == 1
                if evens_strict and not odd:
                    ok = False
                    break
                if not evens_strict and odd:
                    ok = False
                    break
        if ok:
            count += 1
    return count


def matrix_supercommutator(a, b, parity_a, parity_b):
    """[a, b] = ab - (-1)^{p(a)p(b)} ba for dense square matrices."""
    n = len(a)
    sign = -1 if (parity_a and parity_b) else 1

    def mul(x, y):
        return [
            [sum((x[i][k] * y[k][j] for k in range(n)), rational(0) * 1) for j in range(n)]
            for i in range(n)
        ]

    ab = mul(a, b)
    ba = mul(b, a)
    return [[ab[i][j] - sign * ba[i][j] for j in range(n)] for i in range(n)]
