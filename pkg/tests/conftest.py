import numpy as np
import pytest

import torusdyn as td


@pytest.fixture(scope="session")
def std_k2():
    return td.make_standard_map(2.0)


@pytest.fixture(scope="session")
def fp_origin(std_k2):
    pp = td.newton_periodic(std_k2, 1, (0, 0), (0.1, 0.1))
    assert pp is not None
    assert np.linalg.norm(pp.point) < 1e-10
    return pp
