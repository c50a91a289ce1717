# Copyright (c) 2026 The salt Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Speaker anonymization in a self-supervised latent space, plus metrics."""

from ._salt import (
    SaltError,
    SpeakerPool,
    __version__,
    anonymize,
    compute_eer,
    diag_dominance,
    estimate_f0,
    extrapolate_weights,
    gain_vd,
    knn_match,
    main,
    pca_project,
    pearson,
    pitch_correlation,
    read_features,
    sample_weights,
    weighted_average,
    write_features,
)

__all__ = [
    "SaltError",
    "SpeakerPool",
    "__version__",
    "anonymize",
    "compute_eer",
    "diag_dominance",
    "estimate_f0",
    "extrapolate_weights",
    "gain_vd",
    "knn_match",
    "main",
    "pca_project",
    "pearson",
    "pitch_correlation",
    "read_features",
    "sample_weights",
    "weighted_average",
    "write_features",
]
