import numpy as np
import pytest

from fucik import kernel, _pykernel
from fucik.weights import PiecewisePeriodic, Sampled, ScaledWeight, Trig, AffineModulated

cy = pytest.importorskip("fucik._kernel")


def _desc(w):
    k, eps, da, db, par = w.descriptor()
    return int(k), float(eps), float(da), float(db), np.ascontiguousarray(par, float)


@pytest.mark.parametrize("w", [
    Trig(2, 1, 1),
    ScaledWeight(PiecewisePeriodic((1, 3, 2)), 1 / 8),
    Sampled((1.0, 2.5, 1.5, 3.0)),
    AffineModulated(ScaledWeight(Trig(2, 1, 1), 1 / 16), 0.0, 1.0),
])
@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_backends_agree(w, p):
    args = (p, 30.0, 60.0, *_desc(w), *_desc(w), 0.0, 1.0, 2000, 0.0, 1.0)
    a = cy.shoot(*args)
    b = _pykernel.shoot(*args)
    assert a[4:] == b[4:]
    assert np.allclose(a[:4], b[:4], rtol=1e-12, atol=1e-14)


def test_backend_flag():
    assert kernel.BACKEND in ("cython", "python")


def test_fallback_selected_without_extension():
    import subprocess
    import sys
    code = (
        "import sys; sys.modules['fucik._kernel'] = None\n"
        "import fucik.kernel as k; from fucik.shoot1d import lambda1_shoot\n"
        "from fucik.weights import Constant\n"
        "print(k.BACKEND, repr(lambda1_shoot(Constant(1), 2.0, rtol=1e-8)))\n"
    )
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    backend, value = out.stdout.split()
    assert backend == "python"
    assert float(value) == pytest.approx(np.pi ** 2, rel=1e-8)
