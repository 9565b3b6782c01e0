from hypothesis import strategies as st

from exodromy.poset import FinPoset


@st.composite
def posets(draw, max_size=5):
    """Random posets on range(n): relations only go up in index order, then close."""
    n = draw(st.integers(1, max_size))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    P = FinPoset.from_relations(range(n), chosen)
    perm = draw(st.permutations(range(n)))
    # shuffle labels so index order and order relation are not tied together
    return FinPoset([P.elements[perm[i]] for i in range(n)],
                    [[P.leq[perm[i]][perm[j]] for j in range(n)] for i in range(n)])


@st.composite
def permutation_groups(draw, max_degree=4, max_gens=2):
    from exodromy.groups import FinGroup
    n = draw(st.integers(1, max_degree))
    gens = draw(st.lists(st.permutations(range(n)), min_size=1, max_size=max_gens))
    return FinGroup(n, [tuple(g) for g in gens])
