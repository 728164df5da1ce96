"""Exact scalar fields and the linear-algebra engine shared by every module."""
from ._backend import BACKEND
from .linalg import (
    ExactMatrix,
    LinearSolver,
    RowReducer,
    kernel_basis,
    mat_vec,
    rank,
    rref,
    solve,
    sparse_kernel,
    sparse_rank,
    sparse_solve,
)
from .scalars import (
    QQ,
    QQ_I,
    ExactScalar,
    Field,
    FieldMismatch,
    Scalar,
    field_of,
    format_scalar,
    parse_scalar,
    sign,
    to_float,
)

__all__ = [
    "BACKEND", "ExactMatrix", "LinearSolver", "RowReducer", "ExactScalar", "Field", "FieldMismatch", "QQ", "QQ_I", "Scalar",
    "field_of", "format_scalar", "kernel_basis", "mat_vec", "parse_scalar", "rank", "rref",
    "sign", "solve", "sparse_kernel", "sparse_rank", "sparse_solve", "to_float",
]
