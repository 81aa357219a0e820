"""
Script to write the sample matrices used in the README examples into data/.

Usage:
    python scripts/write_sample_matrices.py [output_dir]
"""

import sys
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import numpy as np

from kreinspec.numerics.fourlevel import FourLevelParams, build_hamiltonian, model_metric
from kreinspec.services.matrix_io import write_matrix

SAMPLE_PARAMS = FourLevelParams(a0=1.0, A=0.5 + 0.3j, B=0.2 - 0.1j)


def write_samples(out_dir: Path) -> None:
    """Write the four sample matrix files."""
    out_dir.mkdir(parents=True, exist_ok=True)

    p = SAMPLE_PARAMS
    write_matrix(
        out_dir / "fourlevel_H.txt",
        build_hamiltonian(p),
        comment=f"four-level model a0={p.a0!r} A={p.A!r} B={p.B!r}",
    )
    write_matrix(out_dir / "eta_model.txt", model_metric(), comment="metric diag(1, -1, -1, 1)")
    write_matrix(
        out_dir / "jordan.txt",
        np.array([[1.0, 1.0], [0.0, 1.0]], dtype=np.complex128),
        comment="2x2 Jordan block (defective)",
    )
    write_matrix(
        out_dir / "hermitian.txt",
        np.array([[2.0, 1j], [-1j, 3.0]], dtype=np.complex128),
        comment="Hermitian 2x2",
    )
    print(f"✓ Sample matrices written to {out_dir}")


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent.parent / "data"
    write_samples(target)
