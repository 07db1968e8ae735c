import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sdwsn_cusum.errors import RangeError
from sdwsn_cusum.series import (
    MetricKind,
    MetricSeries,
    WindowSpec,
    autocovariances,
    discard_bootstrap,
    read_csv,
    sample_autocovariance,
    sample_mean,
    slice_series,
    write_csv,
)

floats = st.floats(-1e3, 1e3, allow_nan=False)


def ctrl(values):
    return MetricSeries(MetricKind.CONTROL_OVERHEAD, np.abs(np.asarray(values, float)))


def test_slice_examples():
    s = ctrl([1, 2, 3, 4])
    assert slice_series(s, 0, 4) == s
    assert list(slice_series(s, 1, 3).values) == [2, 3]
    with pytest.raises(RangeError):
        slice_series(ctrl([1, 2]), 1, 1)
    with pytest.raises(RangeError):
        slice_series(s, 0, 5)


@given(st.lists(st.floats(0, 100), min_size=4, max_size=40), st.data())
def test_slice_composes(vals, data):
    s = ctrl(vals)
    a = data.draw(st.integers(0, len(vals) - 2))
    b = data.draw(st.integers(a + 2, len(vals)))
    c = data.draw(st.integers(0, b - a - 1))
    d = data.draw(st.integers(c + 1, b - a))
    assert slice_series(slice_series(s, a, b), c, d) == slice_series(s, a + c, a + d)


def test_slice_keeps_kind_and_interval():
    s = MetricSeries(MetricKind.DELIVERY_RATE, [0.5, 0.6, 0.7], sample_interval=60.0)
    t = slice_series(s, 1, 3)
    assert t.metric_kind is MetricKind.DELIVERY_RATE and t.sample_interval == 60.0


def test_value_ranges_validated():
    with pytest.raises(ValueError):
        MetricSeries(MetricKind.DELIVERY_RATE, [0.5, 1.2])
    with pytest.raises(ValueError):
        MetricSeries(MetricKind.CONTROL_OVERHEAD, [3.0, -1.0])


def test_values_read_only():
    s = ctrl([1, 2, 3])
    with pytest.raises(ValueError):
        s.values[0] = 9


def test_autocov_examples():
    assert sample_autocovariance([1, 1, 1, 1], 0) == 0
    assert sample_autocovariance([1, -1, 1, -1], 0) == 1
    # divide-by-N: three products of -1 over N=4 (dividing by N-lag would give -1)
    assert sample_autocovariance([1, -1, 1, -1], 1) == pytest.approx(-0.75)
    with pytest.raises(RangeError):
        sample_autocovariance([1, 2, 3], 3)
    assert sample_mean([1, 2, 3, 6]) == 3


def test_autocov_against_definition():
    # oracle: textbook biased estimator written out as a double loop
    x = [0.3, -1.2, 2.5, 0.0, 1.1, -0.4, 0.9]
    n, m = len(x), sum(x) / len(x)
    for lag in range(4):
        ref = sum((x[i] - m) * (x[i + lag] - m) for i in range(n - lag)) / n
        assert sample_autocovariance(x, lag) == pytest.approx(ref, abs=1e-14)
    np.testing.assert_allclose(autocovariances(np.array(x), 3), [sample_autocovariance(x, k) for k in range(4)])


@given(st.lists(floats, min_size=3, max_size=50), st.data())
def test_autocov_cauchy_schwarz(vals, data):
    lag = data.draw(st.integers(0, len(vals) - 1))
    g0 = sample_autocovariance(vals, 0)
    assert g0 >= 0
    assert abs(sample_autocovariance(vals, lag)) <= g0 * (1 + 1e-9) + 1e-9


def test_discard_bootstrap():
    s = ctrl(range(300))
    t = discard_bootstrap(s)
    assert len(t) == 285 and t.values[0] == 15 and t.start_index_offset == 15


def test_window_spec():
    w = WindowSpec(train_start=0, monitor_start=250, monitor_length=50)
    assert w.is_complete(300) and not w.is_complete(299)
    with pytest.raises(ValueError):
        WindowSpec(train_start=5, monitor_start=5, monitor_length=10)


def test_csv_roundtrip(tmp_path):
    s = MetricSeries(MetricKind.DELIVERY_RATE, [0.1, 1 / 3, math.pi / 4])
    p = tmp_path / "x.csv"
    write_csv(s, p)
    assert p.read_text().splitlines()[0] == "index,value"
    assert read_csv(p, MetricKind.DELIVERY_RATE) == s
