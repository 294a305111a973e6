import json
import math

import pytest

import spoonflow


def test_generators_build_valid_networks():
    assert spoonflow.generator_names() == ["circle_spoon", "ellipse_spoon", "dumbbell_spoon"]
    for name in spoonflow.generator_names():
        net = spoonflow.generate(name)
        assert net.validate() == []
        assert net.max_angle_deviation() < 1e-2
        assert len(net.loop) == 257 and len(net.handle) == 65
    net = spoonflow.generate("circle_spoon")
    assert abs(net.area() - math.pi) < 0.01 * math.pi
    assert 0.0 < net.embeddedness() <= 4.0 * math.sqrt(3.0) + 1e-9


def test_network_json_round_trip():
    net = spoonflow.generate("ellipse_spoon")
    back = spoonflow.Network.from_json(net.to_json())
    assert back.loop == net.loop
    assert back.handle == net.handle
    assert json.loads(net.to_json())["domain"]["type"] == "disc"


def test_short_run_follows_the_area_law():
    cfg = spoonflow.FlowConfig()
    cfg.t_max = 0.02
    cfg.compute_E = False
    result = spoonflow.run(spoonflow.generate("circle_spoon"), cfg)
    assert result["stop"]["reason"] == "TimeLimit"
    first, last = result["monitors"][0], result["monitors"][-1]
    slope = (last["A"] - first["A"]) / (last["t"] - first["t"])
    assert slope == pytest.approx(-5.0 * math.pi / 3.0, rel=0.05)
    assert len(result["snapshots"]) == len(result["monitors"])


def test_shooting_and_densities():
    spoon = spoonflow.shoot_brakke_spoon(ds=1e-3)
    assert spoon["closure_residual"] < 1e-10
    assert spoon["turning"] == pytest.approx(5.0 * math.pi / 3.0, abs=1e-4)
    assert spoon["density"] > 1.5
    assert spoonflow.flat_density("Line") == pytest.approx(1.0, abs=1e-6)
    assert spoonflow.flat_density("HalfLine") == pytest.approx(0.5, abs=1e-6)
    assert spoonflow.flat_density("FlatTriod") == pytest.approx(1.5, abs=1e-6)
    assert spoonflow.singular_time(math.pi) == pytest.approx(0.6)


def test_errors_raise_spoonflow_error():
    with pytest.raises(spoonflow.SpoonflowError, match="InvalidArgument"):
        spoonflow.generate("teapot")
    with pytest.raises(spoonflow.SpoonflowError, match="GeometryInfeasible"):
        spoonflow.generate("circle_spoon", handle=2.0, domain_radius=1.5)
    with pytest.raises(spoonflow.SpoonflowError):
        spoonflow.shoot_brakke_spoon(method="newton")
    with pytest.raises(spoonflow.SpoonflowError):
        spoonflow.flat_density("Cross")
