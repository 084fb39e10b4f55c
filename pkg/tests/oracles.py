"""Independent reference implementations used to derive frozen test values.

Nothing here imports from esaembed; each routine works on plain lists,
integer vertex ids and brute force so that it shares no code path with the
package.
"""
from fractions import Fraction
import itertools


def rewrite_graph(family, n, k):
    """Edge rewriting on anonymous integer vertices; returns (V, edges)."""
    V = 2
    edges = [(0, 1)]
    for _ in range(n):
        new = []
        for u, w in edges:
            if family == "diamond":
                for _ in range(k):
                    x = V
                    V += 1
                    new += [(u, x), (x, w)]
            else:
                a, c = V, V + 1
                V += 2
                new += [(u, a), (c, w)]
                for _ in range(k):
                    b = V
                    V += 1
                    new += [(a, b), (b, c)]
        edges = new
    return V, edges


def floyd_warshall(V, edges):
    inf = float("inf")
    d = [[0 if i == j else inf for j in range(V)] for i in range(V)]
    for u, w in edges:
        d[u][w] = d[w][u] = 1
    for m in range(V):
        dm = d[m]
        for i in range(V):
            dim = d[i][m]
            if dim == inf:
                continue
            di = d[i]
            for j in range(V):
                if dim + dm[j] < di[j]:
                    di[j] = dim + dm[j]
    return d


def distance_multiset(family, n, k):
    V, edges = rewrite_graph(family, n, k)
    d = floyd_warshall(V, edges)
    return sorted(int(d[i][j]) for i in range(V) for j in range(i + 1, V))


def prefix_sup(values):
    best = total = 0
    for x in values:
        total += x
        best = max(best, abs(total))
    return best


def l1(values):
    return sum(abs(x) for x in values)


def rad(M, a, nu):
    """Rademacher sign for the label at position a (1-based) in 1..M."""
    return -1 if (nu // 2 ** (M - a)) % 2 else 1


def warmup_diamond(k):
    """Images of D_{1,k} written out by hand: top = h per block, m_j = h_{r_j}."""
    M = k
    top, mids = [], {j: [] for j in range(1, k + 1)}
    for nu in range(2**M):
        top += [1, 1, -1, -1]
        for j in range(1, k + 1):
            mids[j] += [0, 1, -1, 0] if rad(M, j, nu) == 1 else [1, 0, 0, -1]
    return [0] * (4 * 2**M), mids, top


def r_brute(zi, zj, aN):
    """First r with aN <= |prefix| < aN + 1, straight from the definition."""
    s = Fraction(0)
    for r, (a, b) in enumerate(zip(zi, zj), start=1):
        s += Fraction(a) - Fraction(b)
        if aN <= abs(s) < aN + 1:
            return r
    return None


def color_brute(rij, ril, rjl):
    M = max(rij, ril, rjl)
    labels = []
    if M == rjl:
        labels.append("red")
    elif M == rij and rij > rjl:
        labels.append("blue")
    elif M == ril and ril > max(rij, rjl):
        labels.append("green")
    return labels


def ramsey_graph_check(n, s, c):
    """Exhaustive: every c-colouring of the edges of K_n has a monochromatic K_s."""
    edges = list(itertools.combinations(range(n), 2))
    idx = {e: i for i, e in enumerate(edges)}
    cliques = [[idx[e] for e in itertools.combinations(S, 2)] for S in itertools.combinations(range(n), s)]
    for col in itertools.product(range(c), repeat=len(edges)):
        if not any(len({col[i] for i in q}) == 1 for q in cliques):
            return False
    return True
