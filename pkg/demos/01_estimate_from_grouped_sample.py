"""Recover a summand density from grouped observations, end to end.

We observe 5000 values of Y = X_1 + ... + X_10 where each X is Gumbel with
mean 3 (right-skewed, so the characteristic function of Y is genuinely
complex and naive root-taking would pick wrong branches).  The pipeline:

1. empirical characteristic function of Y on a frequency grid,
2. distinguished-logarithm 10th root -> estimate of the cf of X,
3. data-driven spectral cutoff,
4. truncated Fourier inversion -> density estimate.

Writes ``gumbel_estimate.csv`` (plot-ready: x, fhat, true density).
"""
from groupdeconv import (
    Gumbel,
    UGrid,
    adaptive_cutoff,
    default_xgrid,
    distinguished_root,
    evaluate_grid,
    generate_grouped,
    invert,
    l2_distance,
)

law = Gumbel(mean=3.0, scale=1.0)
n, K = 5000, 10

sample = generate_grouped(law, n, K, seed=42)
print(f"observed {n} sums of {K} draws; mean(Y) = {sample.mean:.3f} "
      f"(so mean(X) is about {sample.mean / K:.3f})")

cutoff = adaptive_cutoff(sample, eta=1.1)
print(f"adaptive cutoff: m = {cutoff.value:.4f} "
      f"(threshold {cutoff.params['threshold']:.4f}, "
      f"cap {cutoff.params['cap']:.4f}, hit: {cutoff.threshold_hit})")

step = 0.002
cf = evaluate_grid(sample, UGrid(u_max=cutoff.value + step, step=step))
root = distinguished_root(cf, cutoff.value)

xgrid = default_xgrid(sample)
estimate = invert(root, cutoff.value, xgrid)

risk = l2_distance(law.pdf, estimate, xgrid)
print(f"squared L2 distance to the true density: {risk:.5f}")

truth = law.pdf(xgrid.points)
with open("gumbel_estimate.csv", "w") as fh:
    fh.write("x,fhat,true\n")
    for x, fh_v, tr in zip(xgrid.points, estimate.values, truth):
        fh.write(f"{x:.6g},{fh_v:.6g},{tr:.6g}\n")
print("wrote gumbel_estimate.csv (x, fhat, true)")
