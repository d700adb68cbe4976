from functools import wraps
from typing import Callable

from app.utils.exceptions import CapabilityError


def require_order(max_attr: str = "smoothness") -> Callable:
    """
    Guard for evaluation methods taking an `order` argument.

    The decorated object must expose `max_attr`, the highest derivative
    order it can supply; asking for more raises CapabilityError.
    """

    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def checker(self, u, order: int = 2, *args, **kwargs):
            available = getattr(self, max_attr, 2)

            if order < 0:
                raise CapabilityError(f"derivative order must be nonnegative, got {order}")

            if order > available:
                raise CapabilityError(
                    f"{type(self).__name__} supplies derivatives up to order "
                    f"{available}, requested {order}"
                )

            return func(self, u, order, *args, **kwargs)

        return checker

    return decorator
