from app.services.fourier.esp import elementary_symmetric, esp_coeffs, leave_one_out
from app.services.fourier.objective import (
    ObjectiveContext,
    eval_objective,
    gradient,
    hessian_restricted,
)
from app.services.fourier.spectrum import ClauseSpectrum, eval_clause, spectrum

__all__ = [
    "ClauseSpectrum",
    "ObjectiveContext",
    "elementary_symmetric",
    "esp_coeffs",
    "eval_clause",
    "eval_objective",
    "gradient",
    "hessian_restricted",
    "leave_one_out",
    "spectrum",
]
