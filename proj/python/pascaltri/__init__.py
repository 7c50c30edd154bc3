"""Complex-moment Pascal triangles: reconstruction, projections, invariants, symmetry."""

from ._pascaltri import (
    MomentTable,
    NumericalError,
    PascalTriangle,
    PixelCloud,
    ValidationError,
    angle_schedule,
    approximate_reflection_axis,
    axis_symmetry,
    classification_metrics,
    compute_moments,
    covariance,
    effective_support,
    elongation,
    frs_folds,
    horizontal_symmetry_score,
    intensities_from_column,
    invariant_triangle,
    load_image,
    orbits_equivalent,
    pascal_triangle,
    radon_moment,
    radon_moment_from_row,
    reconstruct,
    reflection_axes,
    reflection_axis,
    row_from_samples,
    run_experiment,
    save_cloud_csv,
    synth_corpus,
    triangle_distance,
)

__all__ = [name for name in dir() if not name.startswith("_")]
