import numpy as np
import pytest

from dampedwave.timeseries import COLUMNS, TimeSeries, decay_fit


def make_row(t, value=1.0):
    row = {name: value for name in COLUMNS}
    row["t"] = t
    return row


def power_law_series(exponent, coefficient=2.0, n=60, t_max=100.0):
    series = TimeSeries()
    for t in np.linspace(0.0, t_max, n):
        series.append(make_row(t, coefficient * (1.0 + t) ** exponent))
    return series


def test_append_requires_increasing_time():
    series = TimeSeries()
    series.append(make_row(0.0))
    series.append(make_row(0.5))
    with pytest.raises(ValueError):
        series.append(make_row(0.5))


def test_append_requires_all_columns():
    series = TimeSeries()
    row = make_row(0.0)
    del row["mean_u"]
    with pytest.raises(ValueError):
        series.append(row)


def test_blowup_marker_is_terminal():
    series = TimeSeries()
    series.append(make_row(0.0))
    series.append_blowup_marker(0.75)
    assert np.isinf(series.rows[-1]["linf_u"])
    with pytest.raises(ValueError):
        series.append(make_row(1.0))
    finite = series.finite_rows()
    assert len(finite["t"]) == 1


def test_csv_round_trip_exact(tmp_path):
    rng = np.random.default_rng(0)
    series = TimeSeries()
    t = 0.0
    for _ in range(25):
        values = rng.standard_normal(len(COLUMNS)) * 10.0 ** rng.integers(-12, 12)
        row = dict(zip(COLUMNS, np.abs(values)))
        row["t"] = t
        series.append(row)
        t += float(np.abs(rng.standard_normal())) + 1e-3
    path = tmp_path / "series.csv"
    series.to_csv(path)
    loaded = TimeSeries.from_csv(path)
    assert len(loaded) == len(series)
    for name in COLUMNS:
        np.testing.assert_array_equal(loaded.column(name), series.column(name))


def test_csv_header_fixed(tmp_path):
    series = TimeSeries()
    series.append(make_row(0.0))
    path = tmp_path / "series.csv"
    series.to_csv(path)
    header = path.read_text().splitlines()[0]
    assert header == ",".join(COLUMNS)
    assert header.startswith("t,l2_u,l2_grad_u,l2_ut,linf_u,weighted_energy")


def test_csv_round_trips_infinite_marker(tmp_path):
    series = TimeSeries()
    series.append(make_row(0.0))
    series.append_blowup_marker(1.5)
    path = tmp_path / "series.csv"
    series.to_csv(path)
    loaded = TimeSeries.from_csv(path)
    assert np.isinf(loaded.rows[-1]["linf_u"])
    assert loaded.rows[-1]["t"] == 1.5


def test_csv_rejects_foreign_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        TimeSeries.from_csv(path)


def test_decay_fit_exact_power_law():
    series = power_law_series(-0.25)
    slope, stderr = decay_fit(series, "l2_u", 1.0)
    assert slope == pytest.approx(-0.25, abs=1e-10)
    assert stderr < 1e-10


def test_decay_fit_constant_series():
    series = power_law_series(0.0)
    slope, _ = decay_fit(series, "l2_u", 1.0)
    assert slope == pytest.approx(0.0, abs=1e-12)


def test_decay_fit_requires_window_population():
    series = power_law_series(-0.5, n=12, t_max=10.0)
    with pytest.raises(ValueError, match="at least 10"):
        decay_fit(series, "l2_u", 9.0)


def test_decay_fit_names_offending_time():
    series = TimeSeries()
    for t in np.linspace(0.0, 20.0, 15):
        value = 1.0 if t < 10.0 else 0.0
        series.append(make_row(t, value))
    with pytest.raises(ValueError) as err:
        decay_fit(series, "l2_u", 0.0)
    assert "10.0" in str(err.value)


def test_decay_fit_unknown_column():
    series = power_law_series(-1.0)
    with pytest.raises(KeyError):
        series.column("not_a_column")
