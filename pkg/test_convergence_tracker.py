import logging

import pandas as pd
import pytest

from convergence_tracker import ConvergenceTracker


def _tracker(values, **kwargs):
    tracker = ConvergenceTracker("test", **kwargs)
    for level, value in enumerate(values):
        tracker.record(level, value)
    return tracker


def test_geometric_fit():
    fit = _tracker([3.0 * 0.5 ** n for n in range(6)]).fit_geometric()
    assert fit.C == pytest.approx(3.0, rel=1e-12)
    assert fit.rate == pytest.approx(0.5, rel=1e-12)
    assert fit.rms_residual < 1e-12
    assert fit.points == 6


def test_skip_leading_samples():
    fit = _tracker([10.0, 1.0, 0.1, 0.01]).fit_geometric(skip=1)
    assert fit.points == 3
    assert fit.rate == pytest.approx(0.1)


def test_noise_floor():
    assert _tracker([1e-16, 0.0, 1e-17]).fit_geometric() is None
    fit = _tracker([1e-3, 1e-5, 1e-20], noise_floor=1e-12).fit_geometric()
    assert fit.points == 2


def test_non_monotone_tail_warns(caplog):
    with caplog.at_level(logging.WARNING, logger="convergence_tracker"):
        _tracker([1.0, 0.5, 0.6, 0.1]).fit_geometric()
    assert "non-monotone" in caplog.text


def test_alternating_sequence_window():
    # 0.2^m modulated by a factor 4 on odd levels
    values = [0.2 ** m * (4.0 if m % 2 else 1.0) for m in range(9)]
    plain = _tracker(values).fit_geometric()
    assert plain.rms_residual > 0.5
    fit = _tracker(values).fit_geometric(window=2)
    assert fit.rate == pytest.approx(0.2, rel=1e-12)
    assert fit.rms_residual < 1e-12
    assert fit.points == 8
    assert fit.C == pytest.approx(2.0, rel=1e-12)


def test_window_keeps_geometric_rate():
    fit = _tracker([3.0 * 0.5 ** n for n in range(6)]).fit_geometric(skip=1, window=3)
    assert fit.rate == pytest.approx(0.5, rel=1e-12)
    assert fit.C == pytest.approx(3.0, rel=1e-12)
    assert _tracker([1.0, 0.1]).fit_geometric(window=2) is None
    with pytest.raises(ValueError):
        _tracker([1.0, 0.1]).fit_geometric(window=0)


def test_memory_sampling_is_opt_in():
    assert _tracker([0.5, 0.25]).to_frame()["memory_mb"].isna().all()
    sampled = _tracker([0.5, 0.25], sample_memory=True).to_frame()
    assert (sampled["memory_mb"] > 0).all()


def test_frame_and_csv(tmp_path):
    tracker = _tracker([0.5, 0.25], sample_memory=True)
    frame = tracker.to_frame()
    assert list(frame.columns) == ["level", "value", "timestamp", "memory_mb"]
    assert (frame["memory_mb"] > 0).all()
    path = tracker.save_data(str(tmp_path / "series.csv"))
    assert pd.read_csv(path)["value"].tolist() == [0.5, 0.25]


def test_default_file_name(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    name = _tracker([1.0]).save_data()
    assert name.startswith("convergence_test_")
    assert (tmp_path / name).exists()
