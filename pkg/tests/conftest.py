from hypothesis import HealthCheck, settings, strategies as st

from polydissect.pointconfig import PointConfiguration

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

def _spans(pts):
    try:
        PointConfiguration(pts)
    except ValueError:
        return False
    return True


coord = st.integers(min_value=-4, max_value=4)
point3 = st.tuples(coord, coord, coord)


@st.composite
def configs3(draw, min_points=5, max_points=7):
    """Small full-dimensional integer configurations in R^3, distinct points."""
    pts = draw(st.lists(point3, min_size=min_points, max_size=max_points, unique=True).filter(_spans))
    return PointConfiguration(pts)


CUBE = [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]
OCTAHEDRON = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
TRI_PRISM = [(0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 2), (2, 0, 2), (0, 2, 2)]
BIPYRAMID = [(0, 0, 0), (3, 0, 0), (0, 3, 0), (1, 1, 2), (1, 1, -2)]


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
