from app.services.benchgen.base import BenchmarkGenerator
from app.services.benchgen.parity import ParityLearningGenerator
from app.services.benchgen.random_hybrid import RandomHybridGenerator
from app.services.benchgen.vertex_cover import VertexCoverGenerator

__all__ = [
    "BenchmarkGenerator",
    "ParityLearningGenerator",
    "RandomHybridGenerator",
    "VertexCoverGenerator",
]
