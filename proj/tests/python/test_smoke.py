import pytest

import svaa

ROW = ('{"record_time":"2023-10-17T12:00:01Z","camera_id":1,"class_id":0,'
       '"bbox":[100,200,50,100],"local_id":1,"global_id":%d}')


def test_parse_and_normalize():
    rec = svaa.parse_record(ROW % 5)
    assert rec["global_id"] == 5
    assert rec["bbox"] == (100.0, 200.0, 50.0, 100.0)
    assert svaa.normalize_record(ROW % 5) == svaa.normalize_record(svaa.normalize_record(ROW % 5))


def test_errors_carry_codes():
    with pytest.raises(svaa.Error) as info:
        svaa.parse_record("{")
    assert info.value.code == "MalformedLine"


def test_store_counts_and_metrics():
    store = svaa.Store()
    report = store.ingest_lines([ROW % 1, ROW % 2, ROW % 2, "junk"])
    assert report["accepted"] == 3 and report["rejected"] == 1
    assert len(store) == 3
    counts = store.interval_counts(1, "2023-10-17T12:00:00Z", "2023-10-17T12:00:10Z")
    assert counts == [("2023-10-17T12:00:00Z", 2), ("2023-10-17T12:00:05Z", 0)]
    assert store.current_count("2023-10-17T12:00:02Z") == 2
    prof = store.hourly_average({1: "a"}, "2023-10-17T00:00:00Z", "2023-10-18T00:00:00Z", camera=1)
    assert prof[12] == (2.0, 1)
    assert store.peak_hours({1: "a"}, "2023-10-17T00:00:00Z", "2023-10-18T00:00:00Z", k=1) == [(12, 2.0)]


def test_occupancy_and_anomaly():
    assert svaa.percentile_nearest_rank([0, 0, 0, 1, 1, 1, 2, 3], 75) == 1
    h = svaa.RollingHistory(100)
    for v in [0, 0, 0, 0, 1, 1, 1, 1]:
        h.push(v)
    assert svaa.classify_occupancy(2, h, min_samples=1) == "HIGH"
    m = svaa.RunningMoments()
    for _ in range(15):
        m.add(1)
        m.add(3)
    m.add(2)
    v = svaa.anomaly_check(m, 5)
    assert v["is_anomaly"] and abs(v["z"] - 3.0) < 1e-12


def test_bev_and_heatmap():
    cam = svaa.CameraConfig(1, 1920, 1080, 40, 80)
    x, y = svaa.bev_transform(ROW % 1, cam)
    assert abs(y - 18.706) < 1e-3 and abs(x + 8.135) < 1e-3
    grid = svaa.accumulate_grid([(0.5, 0.5)] * 3, 0, 0, 1, 1, 4, 4)
    assert grid[0][0] == 3
    smooth = svaa.gaussian_smooth(grid, 1.0)
    assert abs(sum(map(sum, smooth)) - 3.0) < 1e-9
    assert svaa.render_pgm([[5.0]]) == "P2\n1 1\n255\n255\n"


def test_simulate_is_deterministic():
    a = svaa.simulate("2023-10-18T11:00:00Z", "2023-10-18T12:00:00Z", seed=3)
    b = svaa.simulate("2023-10-18T11:00:00Z", "2023-10-18T12:00:00Z", seed=3)
    assert a == b and len(a[0]) > 0
    store = svaa.Store()
    assert store.ingest_lines(a[0])["rejected"] == 0
