import pytest
from hypothesis import strategies as st

from sheafcalc import corpus
from sheafcalc.logic import And, Imp, Not, ONE, Or, Var, ZERO


@pytest.fixture(scope="session")
def categories():
    return corpus.categories()


@pytest.fixture(scope="session")
def sites():
    return corpus.sites()


@pytest.fixture(scope="session")
def frames():
    return corpus.frames()


@pytest.fixture
def walking_arrow():
    return corpus.walking_arrow()


@pytest.fixture
def cospan():
    return corpus.cospan()


@pytest.fixture
def fork():
    return corpus.fork_frame()


_names = st.sampled_from(["p", "q", "r", "x", "y1", "long_name"])

terms = st.recursive(
    st.one_of(_names.map(Var), st.just(ZERO), st.just(ONE)),
    lambda t: st.one_of(
        t.map(Not),
        st.tuples(t, t).map(lambda a: And(*a)),
        st.tuples(t, t).map(lambda a: Or(*a)),
        st.tuples(t, t).map(lambda a: Imp(*a)),
    ),
    max_leaves=12,
)
