"""Quantile errors of the three discretizations over growing n.

FD on the disk (n = 10, 20, 40, 80), quadratic FEM normalized by 1/n and
cubic IgA (n = 256, 512, 1024), each against the rearrangement of its symbol.
"""
from gridspec.apps import (
    FDDiskProblem,
    fd_disk_laplacian,
    fem_quadratic_stiffness,
    iga_cubic_stiffness,
    validate_application,
)

QUANTILES = (0.1, 0.5, 0.8, 1.0)


def show(label, rep):
    errs = "  ".join(f"x={e.x:g}: {e.rel_error:.3e}" for e in rep.errors)
    extra = "" if rep.outliers is None else f"  outliers={rep.outliers}"
    print(f"{label:12s} d={rep.dim:6d}  {errs}{extra}")


def main():
    for n in (10, 20, 40, 80):
        res = fd_disk_laplacian(FDDiskProblem(n))
        show(f"fd n={n}", validate_application(res.delta, res.predicted, QUANTILES, counts=n,
                                               outlier_margin=None))
    for n in (64, 256, 1024):
        res = fem_quadratic_stiffness(n)
        show(f"fem n={n}", validate_application(res.A.matrix / n, res.predicted, QUANTILES, counts=n))
    for n in (256, 512, 1024):
        A, f = iga_cubic_stiffness(n)
        show(f"iga n={n}", validate_application(A, f, QUANTILES, counts=n))


if __name__ == "__main__":
    main()
