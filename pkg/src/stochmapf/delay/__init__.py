# -*- coding: utf-8 -*-
# flake8: noqa
"""The stochmapf delay package: gamma delays and their learned models"""


from stochmapf.delay.special import digamma, trigamma, inverse_digamma
from stochmapf.delay.delay_model import (
    GammaParams,
    PriorConfig,
    PosteriorState,
    prior_to_pq,
    observe,
    observe_many,
    map_estimate,
    sample_delay,
    moments_to_params,
    params_to_moments,
)
from stochmapf.delay.edge_models import EdgeModels, edge_models_from_file
