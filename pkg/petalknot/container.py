"""Dependency injection container for petalknot."""

import inspect
from threading import Lock
from typing import Any, Callable, Dict, Type, TypeVar, Union, cast, get_args, get_origin

T = TypeVar("T")


class Container:
    """Maps interface types to singletons, lazy singletons or transient classes."""

    def __init__(self) -> None:
        self._services: Dict[str, Any] = {}
        self._singletons: Dict[str, Any] = {}
        self._lazy: Dict[str, Callable[..., Any]] = {}
        self._lock = Lock()

    def register_singleton(self, interface: Type[T], instance: T) -> None:
        key = self._get_key(interface)
        with self._lock:
            self._singletons[key] = instance
            self._lazy.pop(key, None)

    def register_lazy_singleton(self, interface: Type[T], factory: Callable[..., T]) -> None:
        """Build the instance on first ``get`` and reuse it afterwards."""
        key = self._get_key(interface)
        with self._lock:
            self._singletons.pop(key, None)
            self._lazy[key] = factory

    def register_transient(self, interface: Type[T], implementation: Type[T]) -> None:
        key = self._get_key(interface)
        with self._lock:
            self._services[key] = implementation

    def is_registered(self, interface: Type[Any]) -> bool:
        key = self._get_key(interface)
        tables = (self._singletons, self._lazy, self._services)
        return any(key in table for table in tables)

    def get(self, interface: Type[T]) -> T:
        key = self._get_key(interface)

        if key in self._singletons:
            return cast(T, self._singletons[key])

        if key in self._lazy:
            instance = self._create_with_dependencies(self._lazy[key])
            with self._lock:
                instance = self._singletons.setdefault(key, instance)
                self._lazy.pop(key, None)
            return cast(T, instance)

        if key in self._services:
            return cast(T, self._create_with_dependencies(self._services[key]))

        raise ValueError(f"No registration found for {interface}")

    def _get_key(self, interface: Type[Any]) -> str:
        return f"{interface.__module__}.{interface.__name__}"

    def _create_with_dependencies(self, target: Union[Type[Any], Callable[..., Any]]) -> Any:
        """Call ``target`` with every annotated parameter resolved from the container."""
        sig = inspect.signature(target.__init__ if inspect.isclass(target) else target)

        kwargs = {}
        for param_name, param in sig.parameters.items():
            if param_name == "self" or param.kind in (param.VAR_POSITIONAL, param.VAR_KEYWORD):
                continue
            if param.annotation is inspect.Parameter.empty:
                continue

            actual_type = param.annotation
            if get_origin(actual_type) is Union:
                args = get_args(actual_type)
                if len(args) == 2 and type(None) in args:
                    actual_type = args[0] if args[1] is type(None) else args[1]

            if not inspect.isclass(actual_type):
                continue
            try:
                kwargs[param_name] = self.get(actual_type)
            except ValueError:
                if param.default is inspect.Parameter.empty:
                    raise ValueError(
                        f"Cannot resolve dependency {actual_type} for parameter {param_name}"
                    )

        return target(**kwargs)


_container: Container = Container()


def get_container() -> Container:
    return _container


def inject(interface: Type[T]) -> T:
    return _container.get(interface)


def singleton(interface: Type[T]) -> Callable[[Type[T]], Type[T]]:
    """Register a class as the lazily built singleton for ``interface``."""

    def decorator(cls: Type[T]) -> Type[T]:
        _container.register_lazy_singleton(interface, cls)
        return cls

    return decorator

