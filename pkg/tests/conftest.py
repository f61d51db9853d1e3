import pytest

from sftkit import Alphabet, Pattern, Sft, WangTile, WangTileSet, free_abelian


def pytest_addoption(parser):
    parser.addoption("--extended", action="store_true", default=False,
                     help="run the long optional checks on external tile data")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--extended"):
        return
    skip = pytest.mark.skip(reason="needs --extended")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def z1():
    return free_abelian(1)


@pytest.fixture
def z2():
    return free_abelian(2)


@pytest.fixture
def no_aa(z1):
    """Binary words on Z with no two adjacent a's."""
    o, e = z1.identity(), z1.element(1)
    return Sft(z1, Alphabet(("a", "b")), (Pattern(z1, ((o, 0), (e, 0))),))


@pytest.fixture
def single_tile():
    return WangTileSet((WangTile("0", "0", "0", "0"),))


@pytest.fixture
def clashing_tiles():
    """Two tiles, no edge color shared anywhere: every domino is forbidden."""
    return WangTileSet((WangTile("1", "2", "3", "4"), WangTile("5", "6", "7", "8")))


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Context manager that times a block, checks its limit and logs PASS/FAIL."""
    import contextlib
    import time

    @contextlib.contextmanager
    def run(number, title, limit_s):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            within = elapsed < limit_s
            status = "PASS" if ok and within else "FAIL"
            why = "" if ok else " (check failed)"
            if ok and not within:
                why = " (over time limit)"
            line = f"criterion {number:>2} {status}  {title}  [{elapsed:.1f}s / {limit_s}s]{why}"
            ACCEPTANCE_LINES.append(line)
            print(line)
        assert within, f"criterion {number} took {elapsed:.1f}s, limit {limit_s}s"

    return run


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
