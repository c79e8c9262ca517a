"""tracegen: extract traceable runtime-configuration specifications for
AI-enabled systems from textual requirements kept next to the code.

Pipeline: scan and parse tagged elements, assemble a typed trace graph,
validate it against a meta-model (TTIM) and a JSON-schema subset, traverse
from runtime scenarios to optimizer inputs, and emit a traceable YAML
intermediary document plus a PlantUML overview.
"""

__version__ = "0.1.0"
