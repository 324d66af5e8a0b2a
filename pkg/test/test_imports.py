import importlib
import sys

import pytest

print(f"Python version: {sys.version}")


@pytest.mark.parametrize("module", ["yaml", "dotenv", "numpy", "hypothesis"])
def test_third_party_imports(module):
    assert importlib.import_module(module) is not None


@pytest.mark.parametrize(
    "module",
    [
        "haarint",
        "haarint.errors",
        "haarint.utils",
        "haarint.ratfield",
        "haarint.symgroup",
        "haarint.reptheory",
        "haarint.integrals",
        "haarint.closedforms",
        "haarint.verify",
        "haarint.catalog",
        "haarint.report_generator",
        "haarint.cli",
    ],
)
def test_package_imports(module):
    assert importlib.import_module(module) is not None


def test_numpy_version():
    import numpy

    major = int(numpy.__version__.split(".")[0])
    assert major >= 1
