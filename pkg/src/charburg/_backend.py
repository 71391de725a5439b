"""Select the kernel implementation at import time.

The compiled ``_ckernels`` extension is preferred; setting
``CHARBURG_BACKEND=python`` forces the numpy fallback. Custom source
families always run on the fallback.
"""
import os

from . import _pykernels as python_kernels

try:
    from . import _ckernels as compiled_kernels
except ImportError:  # extension not built
    compiled_kernels = None

if compiled_kernels is not None and os.environ.get("CHARBURG_BACKEND", "").lower() != "python":
    kernels = compiled_kernels
else:
    kernels = python_kernels

BACKEND = kernels.NAME


def for_family(family):
    """Kernel module able to handle ``family``."""
    from .source_terms import Kind

    if family.kind is Kind.CUSTOM:
        return python_kernels
    return kernels
