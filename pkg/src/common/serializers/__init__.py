from .orjson_serializer import OrjsonSerializer

__all__ = ["OrjsonSerializer"]
