import mpmath as mp

# acceptance criteria register their one-line verdicts here
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


def mp_besseli(nu, x):
    return mp.besseli(mp.mpf(nu), mp.mpf(x), maxprec=20000)


def mp_besselk(nu, x):
    return mp.besselk(mp.mpf(nu), mp.mpf(x), maxprec=20000)
