import math
import os

import hsrsched as h


def test_channel_values():
    assert abs(h.path_loss_db(30.0) - 69.583) < 1e-3
    assert h.RadioConfig().breakpoint_m() == 8000.0
    caps = h.capacity_profile()
    assert len(caps) == 30000
    assert caps[0] == 301 and caps[15000] == 62
    assert abs(h.distance_at(15.0) - math.hypot(1500, 30)) < 1e-9


def test_truncated_poisson():
    d = h.truncated_poisson_pmf(1.0, 1e-6)
    assert d.max_arrivals == 9
    assert abs(sum(d.pmf) - 1.0) < 1e-12
    assert d.cdf[-1] == 1.0


def small_config(policy, frames=2000):
    c = h.SimConfig()
    c.services = [h.ServiceSpec(1, 100, 10, 0.99), h.ServiceSpec(2, 60, 10, 0.9)]
    c.scheduler = policy
    c.num_frames = frames
    return c


def test_run_and_checks():
    for p in (h.Policy.dcsa, h.Policy.rr, h.Policy.edf):
        t = h.run(small_config(p))
        assert len(t) == 2000
        cols = t.columns()
        assert len(cols["frame"]) == 2000
        for s in range(2):
            assert sum(cols["arrivals"][s]) == sum(cols["served"][s]) + sum(cols["drops"][s]) + cols["backlog"][s][-1]
        assert h.check_sample_drift(t).passed()
        assert h.check_lemma1(t).passed()
        assert t.to_csv() == h.run(small_config(p)).to_csv()


def test_saturation():
    c = small_config(h.Policy.edf)
    c.capacity_override = sum(s.max_arrivals * s.deadline for s in c.services)
    t = h.run(c)
    assert t.delivery_ratio(0) == 1.0 and t.delivery_ratio(1) == 1.0


def test_oracle():
    assert h.brute_force_lex_min_drops([4, 4], [1, 1], [5], [1, 0]) == [3, 0]
    assert h.brute_force_lex_min_drops([5], [2], [3, 2], [0]) == [0]


def test_config_round_trip():
    path = os.path.join(os.environ.get("HSRSCHED_CONFIGS", "configs"), "fig3.conf")
    cfg = h.load_config(path)
    assert cfg.kind == "fig3"
    again = h.parse_config(cfg.to_text())
    assert again.to_text() == cfg.to_text()
    try:
        h.parse_config("[service.1]\nlambda = x\ndeadline = 1\ndelivery_ratio = 0.9\n")
    except h.ConfigError as e:
        assert ":2:" in str(e)
    else:
        raise AssertionError("expected ConfigError")
