from .progress import plot_fitness_curve, reports_frame

__all__ = [
    "plot_fitness_curve",
    "reports_frame",
]
