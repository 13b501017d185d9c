"""Acceptance gate: every criterion runs at its stated tolerance.

One test per criterion; each prints its pass/fail line and the clause-level
details.  Criterion 6 carries a known-unattainable clause (the truncated
Dirichlet eigenvalue of the hyperbolic ball B_20 is 0.2717, which misses the
required 0.25 +/- 0.02 by 0.0017; see the suite output for the analysis) and
is expected to stay red until the tolerance is revised.
"""

import pytest

from staticlab import acceptance


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number, capsys):
    result = acceptance.run_criterion(number, seed=42, tol_scale=1.0)
    with capsys.disabled():
        print()
        print(result.line())
        for line in result.details:
            print(f"    {line}")
    assert result.passed, f"criterion {number} failed; see details above"
