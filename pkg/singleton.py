import threading


class SingletonMeta(type):
    """
    Metaclass for the service classes. One instance per class per process;
    creation is guarded so concurrent first calls from worker threads agree.
    """
    _instances = {}
    _lock = threading.Lock()

    def __call__(cls, *args, **kwargs):
        if cls not in cls._instances:
            with cls._lock:
                if cls not in cls._instances:
                    cls._instances[cls] = super().__call__(*args, **kwargs)
        return cls._instances[cls]
