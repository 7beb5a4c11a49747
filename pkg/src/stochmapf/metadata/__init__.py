# -*- coding: utf-8 -*-
# flake8: noqa
"""The stochmapf metadata package."""

from stochmapf.metadata.metadata import MetaDataRun
