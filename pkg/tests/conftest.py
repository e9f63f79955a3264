"""Shared hypothesis strategies for the test suite."""

from hypothesis import strategies as st

from la_nav import ProbabilityVector


@st.composite
def probability_vectors(draw, min_actions=2, max_actions=8, min_weight=0.01):
    """Valid probability vectors with strictly positive components.

    The weight floor keeps strict-monotonicity assertions meaningful:
    components stay far enough from 0 and 1 that one update moves them by
    more than an ulp.
    """
    r = draw(st.integers(min_value=min_actions, max_value=max_actions))
    weights = draw(
        st.lists(
            st.floats(min_value=min_weight, max_value=1.0),
            min_size=r,
            max_size=r,
        )
    )
    total = sum(weights)
    return ProbabilityVector(tuple(w / total for w in weights))


@st.composite
def absorbed_vectors(draw, min_actions=2, max_actions=8):
    """Vectors with all mass on a single action."""
    r = draw(st.integers(min_value=min_actions, max_value=max_actions))
    winner = draw(st.integers(min_value=1, max_value=r))
    return ProbabilityVector(tuple(1.0 if i == winner else 0.0 for i in range(1, r + 1))), winner


rates = st.floats(min_value=1e-6, max_value=1.0)
draws = st.floats(min_value=0.0, max_value=1.0, exclude_max=True)
