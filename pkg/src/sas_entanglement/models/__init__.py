"""Data models."""

from sas_entanglement.models.api import *
from sas_entanglement.models.domain import *
