from functools import lru_cache

from hypothesis import HealthCheck, settings

from hamcyl.brute_oracle import oracle_counts, rooted_contractible_cycles
from hamcyl.grid_core import build_cylinder

settings.register_profile("repo", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@lru_cache(maxsize=None)
def cached_oracle(m, n):
    return oracle_counts(build_cylinder(m, n))


@lru_cache(maxsize=None)
def cached_rooted(m, n):
    return tuple(rooted_contractible_cycles(build_cylinder(m, n)))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
