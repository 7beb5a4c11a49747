# -*- coding: utf-8 -*-
"""The stochmapf common package"""


# flake8: noqa
from stochmapf.common.smapf_dialog import SMAPFDialog
from stochmapf.common.smapf_dialog import SMAPFDescription
from stochmapf.common.smapf_dialog import SMAPFShowProgress

from stochmapf.common.sys import _SMAPFFile
