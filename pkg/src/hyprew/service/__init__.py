from .models import (
    CircuitRequest,
    CircuitResponse,
    InterpRequest,
    InterpResponse,
    IsoRequest,
    IsoResponse,
    RewriteRequest,
    RewriteResponse,
    RuleSpec,
)
from .handlers import ServiceError

__all__ = [
    "CircuitRequest", "CircuitResponse", "InterpRequest", "InterpResponse",
    "IsoRequest", "IsoResponse", "RewriteRequest", "RewriteResponse",
    "RuleSpec", "ServiceError",
]
