"""Integral homology of nerves and of group or category presentations."""

from collections import deque
from dataclasses import dataclass

from .category import FinCat, validate_category
from .errors import DegreeOutOfRange, ValidationError
from .layered import PresCat

MAX_DIM = 3


# -- integer matrices ----------------------------------------------------------

def zeros(rows, cols):
    return [[0] * cols for _ in range(rows)]


def identity_matrix(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def determinant(M):
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [row[:] for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def smith_normal_form(M):
    """Return (diagonal, U, V) with U M V diagonal, U and V unimodular.

    ``diagonal`` lists the nonzero invariant factors d1 | d2 | ...; pivots are
    chosen of least absolute value to keep entries small.
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    A = [list(r) for r in M]
    U = identity_matrix(rows)
    V = identity_matrix(cols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in A:
            R[i], R[j] = R[j], R[i]
        for R in V:
            R[i], R[j] = R[j], R[i]

    def add_row(dst, src, c):
        A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for R in A:
            R[dst] += c * R[src]
        for R in V:
            R[dst] += c * R[src]

    t = 0
    while t < min(rows, cols):
        nonzero = [(abs(A[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if A[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # enforce divisibility of the remaining block
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    diagonal = [A[i][i] for i in range(min(rows, cols)) if A[i][i]]
    return diagonal, U, V


def _sparse_invariants(columns, n_rows):
    """Nonzero invariant factors of a sparse integer matrix given by columns.

    Unit pivots are eliminated sparsely (each contributes a factor 1); the
    remaining block goes through the dense Smith form.
    """
    rows = {}
    for j, col in enumerate(columns):
        for i, v in col.items():
            if v:
                rows.setdefault(i, {})[j] = v
    cols = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    units = 0
    progress = True
    while progress:
        progress = False
        for i in sorted(rows):
            r = rows.get(i)
            if r is None:
                continue
            j = next((j for j, v in sorted(r.items()) if v in (1, -1)), None)
            if j is None:
                continue
            pv = r[j]
            for i2 in list(cols.get(j, ())):
                if i2 == i:
                    continue
                r2 = rows[i2]
                c = r2[j] * pv
                for j2, v in r.items():
                    nv = r2.get(j2, 0) - c * v
                    if nv:
                        r2[j2] = nv
                        cols.setdefault(j2, set()).add(i2)
                    else:
                        r2.pop(j2, None)
                        cols[j2].discard(i2)
                if not r2:
                    del rows[i2]
            for j2 in r:
                cols[j2].discard(i)
            del rows[i]
            units += 1
            progress = True
    rest_rows = sorted(rows)
    rest_cols = sorted({j for r in rows.values() for j in r})
    if not rest_rows:
        return [1] * units
    dense = [[rows[i].get(j, 0) for j in rest_cols] for i in rest_rows]
    diag, _, _ = smith_normal_form(dense)
    return [1] * units + diag


# -- chain complexes -----------------------------------------------------------

@dataclass
class ChainComplex:
    """``ranks[n]`` basis sizes and ``boundaries[n]`` for n >= 1: the columns of
    the map C_n -> C_{n-1}, each a sparse dict {row: coefficient}."""
    ranks: tuple
    boundaries: dict
    basis: tuple = ()

    @property
    def max_dim(self):
        return len(self.ranks) - 1

    def matrix(self, n):
        """Dense boundary matrix C_n -> C_{n-1} (rows index C_{n-1})."""
        if not 1 <= n <= self.max_dim:
            raise DegreeOutOfRange("no boundary map in degree %d" % n)
        M = zeros(self.ranks[n - 1], self.ranks[n])
        for j, col in enumerate(self.boundaries[n]):
            for i, v in col.items():
                M[i][j] = v
        return M

    def validate(self):
        report = []
        for n in range(2, self.max_dim + 1):
            for j, col in enumerate(self.boundaries[n]):
                acc = {}
                for i, v in col.items():
                    for k, w in self.boundaries[n - 1][i].items():
                        acc[k] = acc.get(k, 0) + v * w
                if any(acc.values()):
                    report.append("boundary of boundary nonzero in degree %d, basis element %d" % (n, j))
                    break
        return report


def nerve_complex(C, max_dim=MAX_DIM):
    """Normalized nerve: n-chains of composable non-identity morphisms.

    A chain (f1, ..., fn) is read in application order; the inner face i
    replaces f_i, f_{i+1} by their composite and vanishes when that composite
    is an identity.
    """
    if not 0 <= max_dim <= MAX_DIM:
        raise DegreeOutOfRange("max_dim must lie in 0..%d" % MAX_DIM)
    nonid = [f for f in range(C.n_morphisms) if not C.is_identity(f)]
    following = {x: [f for f in nonid if C.src[f] == x] for x in range(C.n_objects)}
    bases = [[(x,) for x in range(C.n_objects)]]
    if max_dim >= 1:
        bases.append([(f,) for f in nonid])
    for n in range(2, max_dim + 1):
        bases.append([ch + (g,) for ch in bases[-1] for g in following[C.tgt[ch[-1]]]])
    index = [{ch: k for k, ch in enumerate(b)} for b in bases]
    boundaries = {}
    for n in range(1, max_dim + 1):
        cols = []
        for ch in bases[n]:
            col = {}

            def add(face, sign):
                k = index[n - 1][face]
                col[k] = col.get(k, 0) + sign
                if col[k] == 0:
                    del col[k]

            if n == 1:
                f = ch[0]
                add((C.tgt[f],), 1)
                add((C.src[f],), -1)
            else:
                add(ch[1:], 1)
                for i in range(1, n):
                    h = C.compose(ch[i], ch[i - 1])
                    if not C.is_identity(h):
                        add(ch[:i - 1] + (h,) + ch[i + 1:], (-1) ** i)
                add(ch[:-1], (-1) ** n)
            cols.append(col)
        boundaries[n] = cols
    K = ChainComplex(tuple(len(b) for b in bases), boundaries, tuple(tuple(b) for b in bases))
    report = K.validate()
    if report:
        raise ValidationError(report, "chain complex")
    return K


def _invariants(K, n):
    if n < 1 or n > K.max_dim:
        return []
    return _sparse_invariants(K.boundaries[n], K.ranks[n - 1])


def homology_groups(K, n):
    """H_n = ker d_n / im d_{n+1} as (betti rank, sorted torsion list)."""
    if n < 0 or n + 1 > K.max_dim:
        raise DegreeOutOfRange("H_%d needs boundaries up to degree %d, complex stops at %d"
                               % (n, n + 1, K.max_dim))
    rank_out = len(_invariants(K, n))
    inv_in = _invariants(K, n + 1)
    betti = K.ranks[n] - rank_out - len(inv_in)
    torsion = sorted(d for d in inv_in if d > 1)
    return betti, torsion


def format_group(betti, torsion):
    parts = (["Z^%d" % betti] if betti > 1 else ["Z"] if betti == 1 else [])
    parts += ["Z/%d" % d for d in torsion]
    return " + ".join(parts) or "0"


def format_homology(groups):
    return ", ".join("H%d=%s" % (n, format_group(*g)) for n, g in enumerate(groups))


def category_homology(C, top=1):
    """H_0..H_top of the nerve of C."""
    K = nerve_complex(C, top + 1)
    return [homology_groups(K, n) for n in range(top + 1)]


# -- presentations ---------------------------------------------------------------

@dataclass
class GroupPresentation:
    """Generators by name; relators are words of (generator index, +1 or -1)."""
    generators: tuple
    relators: tuple = ()

    def __post_init__(self):
        self.generators = tuple(self.generators)
        self.relators = tuple(tuple((g, e) for g, e in r) for r in self.relators)

    def validate(self):
        report = []
        for r in self.relators:
            for g, e in r:
                if not 0 <= g < len(self.generators) or e not in (1, -1):
                    report.append("bad letter %r in relator" % ((g, e),))
        return report

    def word_string(self, word):
        return " ".join(self.generators[g] + ("^-1" if e == -1 else "") for g, e in word) or "1"


def commutator(a, b):
    """[a, b] = a b a^-1 b^-1."""
    return ((a, 1), (b, 1), (a, -1), (b, -1))


def _invariants_dense(rows, n_cols):
    columns = [{} for _ in range(n_cols)]
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if v:
                columns[j][i] = v
    return _sparse_invariants(columns, len(rows))


def _exponent_row(word, n):
    row = [0] * n
    for g, e in word:
        row[g] += e
    return row


def presentation_h1(P):
    """Abelianization of the presented group (or of the fundamental groupoid
    of a presented category) as (rank, sorted torsion list)."""
    if isinstance(P, PresCat):
        n = len(P.generators)
        rows = [[a - b for a, b in zip(_exponent_row(lhs, n), _exponent_row(rhs, n))]
                for _, lhs, rhs in P.relations]
        # spanning forest: tree generators become trivial
        seen = set()
        for comp in P.pi0():
            root = comp[0]
            seen.add(root)
            queue = deque([root])
            while queue:
                x = queue.popleft()
                for g, (_, s, t) in enumerate(P.generators):
                    for a, b in ((s, t), (t, s)):
                        if a == x and b not in seen:
                            seen.add(b)
                            queue.append(b)
                            row = [0] * n
                            row[g] = 1
                            rows.append(row)
    else:
        n = len(P.generators)
        rows = [_exponent_row(r, n) for r in P.relators]
    inv = _invariants_dense(rows, n)
    return n - len(inv), sorted(d for d in inv if d > 1)


# -- Grothendieck construction and van Kampen --------------------------------------

def grothendieck(D):
    """Total category of chain |-> D(chain) over the opposite string poset.

    Objects are (chain, a); a morphism (chain, a) -> (sub, b) for sub a
    subchain is a morphism r(a) -> b in D(sub), r the restriction.
    """
    strings = list(D.strings)
    objects, obj_index = [], {}
    for ch in strings:
        V = D.values[ch]
        for a in range(V.n_objects):
            obj_index[(ch, a)] = len(objects)
            objects.append((ch, V.objects[a]))

    def restriction(ch, sub):
        return None if ch == sub else D.restrictions[(ch, sub)]

    mor_labels, src, tgt, data = [], [], [], []
    mor_index = {}
    for ch in strings:
        subs = [s for s in strings if set(s) <= set(ch)]
        V = D.values[ch]
        for a in range(V.n_objects):
            for sub in subs:
                r = restriction(ch, sub)
                W = D.values[sub]
                ra = a if r is None else r.obj_map[a]
                for phi in W.out_of(ra):
                    key = (ch, a, sub, phi)
                    mor_index[key] = len(data)
                    data.append(key)
                    mor_labels.append((ch, sub, W.mor_labels[phi]))
                    src.append(obj_index[(ch, a)])
                    tgt.append(obj_index[(sub, W.tgt[phi])])
    identities = [mor_index[(ch, a, ch, D.values[ch].identities[a])] for ch, a in
                  ((ch, a) for ch in strings for a in range(D.values[ch].n_objects))]
    into = {}
    for f, t in enumerate(tgt):
        into.setdefault(t, []).append(f)
    table = {}
    for g, (ch2, b, sub2, psi) in enumerate(data):
        for f in into.get(src[g], ()):
            ch, a, sub, phi = data[f]
            r = restriction(sub, sub2)
            rphi = phi if r is None else r.mor_map[phi]
            table[(g, f)] = mor_index[(ch, a, sub2, D.values[sub2].compose(psi, rphi))]
    C = FinCat(objects, mor_labels, src, tgt, identities, table, check=False)
    report = validate_category(C)
    if report:
        raise ValidationError(report, "Grothendieck construction")
    return C


def van_kampen_check(L, top=1):
    """Compare H_0..H_top of the nerve of L with those of the total category of
    its décollage; returns (ok, lhs, rhs)."""
    from .decollage import nerve
    lhs = category_homology(L.cat, top)
    rhs = category_homology(grothendieck(nerve(L)), top)
    return lhs == rhs, lhs, rhs
