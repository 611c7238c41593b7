"""Kernel selection: compiled extension when built, pure Python otherwise."""

try:
    from . import _fastcore as _impl
except ImportError:  # extension not built on this install
    from . import _purecore as _impl

BACKEND = _impl.BACKEND
form_census = _impl.form_census
