"""Shared oracles. These deliberately avoid the package's own integrators."""

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def rk4(f, u0, t, dt=1e-4):
    """Plain RK4 on ``du/dt = f(t, u)``; independent of the package."""
    steps = int(round(t / dt)) if t > 0 else 0
    u = np.array(u0, dtype=complex)
    if steps == 0:
        return u
    h = t / steps
    s = 0.0
    for _ in range(steps):
        k1 = f(s, u)
        k2 = f(s + h / 2, u + h / 2 * k1)
        k3 = f(s + h / 2, u + h / 2 * k2)
        k4 = f(s + h, u + h * k3)
        u = u + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        s += h
    return u


def random_hermitian(rng, n):
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (x + x.conj().T) / 2


def random_stable(rng, n, margin=0.2):
    """Random matrix whose Hermitian part is negative semi-definite minus ``margin``."""
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    skew = (x - x.conj().T) / 2
    y = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    neg = -(y @ y.conj().T) / n - margin * np.eye(n)
    return skew + neg


# PASS/FAIL lines collected by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES = []


@pytest.fixture
def verdict():
    """``verdict(label, ok, detail)`` records one acceptance line and returns ``ok``."""
    def record(label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
