from .process_pool import ProcessPoolBatchExecutor
from .serial import SerialExecutor

__all__ = ["ProcessPoolBatchExecutor", "SerialExecutor"]
