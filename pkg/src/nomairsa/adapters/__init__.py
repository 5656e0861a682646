from .executor import ProcessPoolBatchExecutor, SerialExecutor

__all__ = ["ProcessPoolBatchExecutor", "SerialExecutor"]
