"""Treatment-regimen mining from mixed-type patient records.

Pipeline: encode patients with a mixed-variate RBM, cluster the binary latent
codes, split prescription histories into treatment periods by accumulated
indication-change scores, mine per-cluster per-period regimen trees, and
recommend/evaluate drug sets for held-out patients.
"""

__version__ = "0.1.0"
