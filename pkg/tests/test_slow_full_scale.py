"""Full-scale heatmap runs (hours).  Excluded by default; run explicitly:

    pytest -m slow tests/test_slow_full_scale.py -s
"""

import os

import pytest

from episense.experiments import heatmap_sweep, load_preset

from conftest import acceptance_line

pytestmark = pytest.mark.slow

TARGETS = {
    "fig7ab": (0.678, 0.329),
    "fig7cd": (0.584, 0.437),
    "fig7ef": (0.573, 0.391),
}


@pytest.mark.parametrize("tag", sorted(TARGETS))
def test_full_heatmap_panel_means(tag):
    sweep = heatmap_sweep(load_preset(tag), jobs=os.cpu_count())
    target_a, target_i = TARGETS[tag]
    mean_a = float(sweep.rho_a_mc.mean())
    mean_i = float(sweep.rho_i_mc.mean())
    ok = abs(mean_a - target_a) <= 0.08 and abs(mean_i - target_i) <= 0.08
    acceptance_line(
        f"full 50x50 heatmap means ({tag})", ok,
        f"a={mean_a:.3f}/{target_a} i={mean_i:.3f}/{target_i}",
    )
    assert ok
