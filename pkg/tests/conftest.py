import warnings

import pytest

from lhpsim import (
    DEFAULT_GEOMETRY,
    DEFAULT_PARAMS,
    REFERENCE_INPUTS,
    REFERENCE_STATE,
    REFERENCE_T_COND,
    REFERENCE_T_COND_OUT,
    REFERENCE_T_EVAP,
    OperatingPoint,
    find_equilibrium,
    identify,
)


@pytest.fixture(scope="session")
def reference_op():
    return OperatingPoint(inputs=REFERENCE_INPUTS, state=REFERENCE_STATE,
                          T_evap=REFERENCE_T_EVAP, T_cond=REFERENCE_T_COND,
                          T_cond_out=REFERENCE_T_COND_OUT)


@pytest.fixture(scope="session")
def identified(reference_op):
    return identify(reference_op, DEFAULT_GEOMETRY)


@pytest.fixture(scope="session")
def op_equilibrium():
    """The model's own equilibrium at the reference inputs (V_cc_l held)."""
    return find_equilibrium(REFERENCE_INPUTS, DEFAULT_PARAMS, DEFAULT_GEOMETRY,
                            REFERENCE_STATE)


@pytest.fixture(autouse=True)
def _quiet_range_warnings():
    """Tests intentionally probe outside the soft operating range."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        yield
