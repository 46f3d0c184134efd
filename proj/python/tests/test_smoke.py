import json
import os
import sys

import numpy as np
import pytest

module_dir = os.environ.get("KOLMONET_MODULE_DIR")
if module_dir:
    sys.path.insert(0, module_dir)

kn = pytest.importorskip("kolmonet")


def test_identity_and_composition():
    net = kn.identity_net(3)
    assert net.dims == [3, 6, 3]
    assert net.param_count == 4 * 9 + 9
    x = np.array([1.5, -2.0, 0.25])
    assert np.array_equal(net(x), x)
    both = kn.compose(net, net)
    assert both.length == 3
    batch = np.arange(12.0).reshape(4, 3) - 6.0
    assert np.array_equal(both(batch), batch)


def test_product_accuracy():
    net = kn.product_net(1e-3, 1.0, 1.0)
    grid = np.linspace(-1.0, 1.0, 41)
    a, b = np.meshgrid(grid, grid)
    pts = np.column_stack([a.ravel(), b.ravel()])
    err = np.abs(net(pts)[:, 0] - pts[:, 0] * pts[:, 1])
    assert err.max() <= 1e-3
    assert net(np.array([0.0, 0.8]))[0] == 0.0


def test_shape_errors():
    with pytest.raises(ValueError):
        kn.compose(kn.identity_net(2), kn.identity_net(3))
    with pytest.raises(ValueError):
        kn.identity_net(2)(np.zeros(3))


def test_bounds():
    assert kn.frak_D(1.0, 3.0) == 8136.0
    params = kn.RegularityParams(T=1.0, kappa=1.0, eta=1.0, p=2.0)
    plan = kn.plan_budget(params, 10, 0.1)
    assert plan["cost_exponent"] == 218
    assert not plan["representable"]
    assert kn.dnn_param_bound_log10(params, 2, 16, 64, 2 ** -8) > 0


def test_solve_serialize_verify():
    sol = kn.solve("heat_relu", 1, 4, 16, 2 ** -6, 7)
    prov = sol.provenance
    assert prov["problem"] == "heat_relu"
    assert prov["N"] == 4 and prov["M"] == 16
    text = sol.to_json()
    assert json.loads(text)["format"] == "kolmonet-network"
    again = kn.Solution.from_json(text)
    assert again.to_json() == text
    assert text == kn.solve("heat_relu", 1, 4, 16, 2 ** -6, 7).to_json()
    result = kn.verify(again, 1, samples=2000, seed=3)
    assert result["pass"]
    assert result["lp_error_vs_mc_average"] < 0.05
    y = sol(np.array([[0.5, 0.0]]))
    assert y.shape == (1, 1)
    assert abs(y[0, 0] - kn.exact_solution("heat_relu", 1, 0.5, [0.0])) < 0.5


def test_parse_error():
    with pytest.raises(ValueError):
        kn.Network.from_json('{"format": "kolmonet-network"')
