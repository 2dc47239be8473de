import re

import numpy as np
import pytest

from branched_annulus import BranchedAnnulus
from branched_annulus.errors import InputError, MissingTraces
from branched_annulus.render import (
    RenderConfig,
    collect_drawing_traces,
    default_config,
    render_annulus_complex,
    render_branched_annulus,
    render_cacti,
    resample,
)
from frozen_values import RUNNING_COEFFS


def classes(svg):
    return re.findall(r'<path class="([^"]+)"', svg)


def count(svg, cls):
    return classes(svg).count(cls)


def coordinates(svg):
    """Every (x, y) pair following an M or L command."""
    return np.array([(float(x), float(y)) for x, y in re.findall(r"[ML] (-?[\d.]+) (-?[\d.]+)", svg)])


@pytest.fixture(scope="module")
def drawing():
    est = BranchedAnnulus(monodromy=False, merge_oracle=False).fit(RUNNING_COEFFS)
    cvl = est.critical_data_.critical_values
    cfg = default_config(cvl)
    traces = collect_drawing_traces(est.polynomial_, est.roots_, est.critical_data_, est.cells_, cfg)
    return est, cfg, traces


def test_annulus_complex_running(drawing):
    est, cfg, _ = drawing
    svg = render_annulus_complex(est.cells_, est.critical_data_.critical_values, cfg)
    assert (count(svg, "latitude"), count(svg, "longitude"), count(svg, "critical-value")) == (3, 4, 4)
    assert count(svg, "boundary") == 2
    assert set(re.findall(r"<(\w+)", svg)) == {"svg", "path", "title"}
    assert svg == render_annulus_complex(est.cells_, est.critical_data_.critical_values, cfg)


def test_annulus_complex_single_value_and_canvas():
    est = BranchedAnnulus(monodromy=False).fit([-1, 0, 1])
    cfg = RenderConfig(0.2, 0.1, canvas_size=640)
    svg = render_annulus_complex(est.cells_, est.critical_data_.critical_values, cfg)
    assert (count(svg, "latitude"), count(svg, "longitude")) == (1, 1)
    assert 'width="640" height="640"' in svg


def test_config_validation():
    with pytest.raises(InputError):
        RenderConfig(0.1, 0.2).validate()
    with pytest.raises(InputError):
        RenderConfig(0.3, 0.1).validate([0.46, -1.62])
    RenderConfig(0.2, 0.1).validate([0.46, -1.62])
    cfg = default_config([0.46, -1.62])
    assert cfg.alpha == pytest.approx(0.4 * 0.46) and cfg.beta == pytest.approx(cfg.alpha / 2)


def test_branched_running(drawing):
    est, cfg, traces = drawing
    svg = render_branched_annulus(traces, cfg)
    cls = classes(svg)
    assert cls.count("root-circle") == 5
    assert sorted({c for c in cls if c.startswith("direction-")}) == [f"direction-{j}" for j in range(est.cells_.k)]
    assert sorted({c for c in cls if c.startswith("level-")}) == [f"level-{i}" for i in range(est.cells_.ell)]
    assert cls.count("root") == 5 and cls.count("critical-point") == 4
    # everything lies inside the disk image (radius 480 about the canvas center)
    xy = coordinates(svg)
    assert np.max(np.hypot(xy[:, 0] - 500, xy[:, 1] - 500)) <= 480.001
    assert svg == render_branched_annulus(traces, cfg)


def test_structure_independent_of_sampling(drawing):
    _, cfg, traces = drawing
    coarse = RenderConfig(cfg.alpha, cfg.beta, samples_per_curve=8)
    fine = RenderConfig(cfg.alpha, cfg.beta, samples_per_curve=1024)
    assert classes(render_branched_annulus(traces, coarse)) == classes(render_branched_annulus(traces, fine))


def test_cacti_drawing(drawing):
    est, cfg, traces = drawing
    svg = render_cacti(traces, cfg)
    assert not any(c.startswith("direction-") for c in classes(svg))
    assert len({c for c in classes(svg) if c.startswith("level-")}) == est.cells_.ell


def test_pair_of_pants():
    est = BranchedAnnulus(monodromy=False).fit([-1, 0, 1])
    cfg = default_config(est.critical_data_.critical_values, samples_per_curve=64)
    traces = collect_drawing_traces(est.polynomial_, est.roots_, est.critical_data_, est.cells_, cfg)
    svg = render_branched_annulus(traces, cfg)
    assert count(svg, "root-circle") == 2
    # one figure-eight: a single level family, its two lobes pinned at the critical point 0
    assert len(traces.level_families) == 1 and count(svg, "level-0") == 2
    assert all(np.min(np.abs(lobe)) == 0 for lobe in traces.level_families[0])


def test_missing_traces(drawing):
    _, cfg, traces = drawing
    with pytest.raises(MissingTraces):
        render_branched_annulus(None, cfg)
    empty = type(traces)(traces.roots, traces.critical_points, traces.root_circles, [], [], [], [])
    with pytest.raises(MissingTraces):
        render_branched_annulus(empty, cfg)
    with pytest.raises(MissingTraces):
        render_cacti(empty, cfg)


def test_resample_keeps_anchor():
    curve = np.linspace(0, 1, 101) + 0j
    curve[37] = 0.37 + 0.2j
    out = resample(curve, 10, keep=[37])
    assert 0.37 + 0.2j in out and out[0] == 0 and out[-1] == 1
    closed = resample(np.exp(2j * np.pi * np.linspace(0, 1, 50, endpoint=False)), 20, closed=True)
    assert abs(closed[0] - 1) < 1e-12 and abs(closed[-1] - 1) > 0.1
