"""Python face of the lattice-current verification library.

Everything heavy lives in the compiled extension ``_vertexlab``; this
package re-exports its surface: check-suite runners, deterministic table
emitters, JSON-described lattice jobs for both the spin and the height
model, and exact cyclic-spectrum arithmetic (Fractions throughout).
"""

from ._vertexlab import (
    conformal_dimensions,
    csos,
    emit_table,
    lattice_job_roundtrip,
    random_walk,
    rsos_probe,
    run_suite,
    run_suite_csv,
    sos_current,
    sos_partition,
    spectrum,
    suite_names,
    vertex_job,
    ybe_residual,
)

__all__ = [
    "conformal_dimensions",
    "csos",
    "emit_table",
    "lattice_job_roundtrip",
    "random_walk",
    "rsos_probe",
    "run_suite",
    "run_suite_csv",
    "sos_current",
    "sos_partition",
    "spectrum",
    "suite_names",
    "vertex_job",
    "ybe_residual",
]
