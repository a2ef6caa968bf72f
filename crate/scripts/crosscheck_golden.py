#!/usr/bin/env python3
"""Recompute the composite divergence score for two score-matrix CSVs with numpy.

Written independently of the Rust implementation; used once to cross-check
the pinned golden report. Defaults mirror the library defaults: row-wise
population z-scores, population covariance of the normalized rows, L1
eigen shift over descending spectra divided by sqrt(n), harmonic mean with
the cosine distance, plus the Euclidean distance of the raw means.

usage: crosscheck_golden.py A.csv B.csv
"""
import csv
import sys

import numpy as np


def load(path):
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    return np.array([[float(x) for x in r[1:]] for r in rows[1:]])


def row_z(m):
    mu = m.mean(axis=1, keepdims=True)
    sd = m.std(axis=1, keepdims=True)
    out = np.where(sd > 0, (m - mu) / np.where(sd > 0, sd, 1.0), 0.0)
    return out


def main(a_path, b_path):
    a, b = load(a_path), load(b_path)
    n = a.shape[1]
    za, zb = row_z(a), row_z(b)
    ma, mb = za.mean(axis=0), zb.mean(axis=0)
    cosine = 1.0 - ma @ mb / (np.linalg.norm(ma) * np.linalg.norm(mb))
    ea = np.sort(np.linalg.eigvalsh(np.cov(za, rowvar=False, bias=True)))[::-1]
    eb = np.sort(np.linalg.eigvalsh(np.cov(zb, rowvar=False, bias=True)))[::-1]
    ea, eb = np.clip(ea, 0, None), np.clip(eb, 0, None)
    shift = np.abs(ea - eb).sum()
    shift_n = shift / np.sqrt(n)
    hm = 2 * cosine * shift_n / (cosine + shift_n)
    euclid = np.linalg.norm(a.mean(axis=0) - b.mean(axis=0))
    for name, v in [
        ("cosine", cosine),
        ("eigen_shift_raw", shift),
        ("eigen_shift_normalized", shift_n),
        ("euclidean", euclid),
        ("harmonic_mean", hm),
        ("gpi_diff", hm + euclid),
    ]:
        print(f"{name} {v:.15f}")


if __name__ == "__main__":
    main(*sys.argv[1:3])
