from app.services.optimizer.descent import (
    gradient_mapping,
    is_feasible,
    project_box,
    run_descent,
)
from app.services.optimizer.saddle import (
    LocalPolynomial,
    dec_inner_saddle,
    is_zero,
    neg_direction_saddle,
    use_hessian,
)

__all__ = [
    "LocalPolynomial",
    "dec_inner_saddle",
    "gradient_mapping",
    "is_feasible",
    "is_zero",
    "neg_direction_saddle",
    "project_box",
    "run_descent",
    "use_hessian",
]
