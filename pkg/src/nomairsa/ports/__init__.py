from .executor import BatchExecutorPort

__all__ = ["BatchExecutorPort"]
