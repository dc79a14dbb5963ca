from typing import (
    Any,
    Callable,
    Generic,
    Optional,
    Type,
    TypeVar,
    cast,
)

RT = TypeVar("RT")


class cached_property(Generic[RT]):
    """Cached property.

    A property descriptor that caches the return value of the get function
    in the instance ``__dict__`` until it is reset.

    Examples:
        .. sourcecode:: python

            @cached_property
            def inputs(self):
                return np.concatenate(self._blocks)

            def append(self, block):
                self._blocks.append(block)
                type(self).inputs.reset(self)
    """

    def __init__(self, fget: Callable[[Any], RT], doc: str = None) -> None:
        self.__get: Callable[[Any], RT] = fget
        self.__doc__ = doc or fget.__doc__
        self.__name__ = fget.__name__
        self.__module__ = fget.__module__

    def is_set(self, obj: Any) -> bool:
        return self.__name__ in obj.__dict__

    def reset(self, obj: Any) -> None:
        """Drop the cached value so the next access recomputes it."""
        obj.__dict__.pop(self.__name__, None)

    def __get__(self, obj: Any, type: Optional[Type] = None) -> RT:
        if obj is None:
            return cast(RT, self)
        try:
            return cast(RT, obj.__dict__[self.__name__])
        except KeyError:
            value = obj.__dict__[self.__name__] = self.__get(obj)
            return value

    def __set__(self, obj: Any, value: RT) -> None:
        raise AttributeError(f"{self.__name__} is computed and cannot be assigned")
