"""
Component Registry

Named building blocks a scenario file can refer to: plants, constraints,
barrier operators and value-function bases.

Each category carries a member contract that is checked when a class
registers, and every registered class records the keyword parameters its
constructor accepts so scenario ``params`` can be checked by name before
anything is built.
"""

import inspect
from dataclasses import dataclass, field
from typing import Any, Optional

CATEGORIES = ("plant", "constraint", "barrier", "basis")

# Members a registered class must expose, per category
CATEGORY_MEMBERS: dict[str, tuple[str, ...]] = {
    "plant": ("n", "m", "p", "regressor", "drift", "input_matrix"),
    "constraint": ("h", "grad"),
    "barrier": ("value", "inverse", "gain"),
    "basis": ("dim", "sigma", "grad"),
}

# Integer sizes that must be positive on a built instance
CATEGORY_SIZES: dict[str, tuple[str, ...]] = {
    "plant": ("n", "m", "p"),
    "constraint": (),
    "barrier": (),
    "basis": ("dim", "L"),
}


@dataclass
class ComponentMetadata:
    """Metadata for a registered component."""
    name: str                    # Identifier used in scenario files
    category: str                # One of CATEGORIES
    class_ref: type              # Component class
    description: str             # One-line summary
    properties: list[str]        # Tags: ["case-study", "linear", ...]
    params: tuple[str, ...] = field(default_factory=tuple)  # Constructor keywords
    open_params: bool = False    # Constructor takes **kwargs


def _constructor_params(component_class: type) -> tuple[tuple[str, ...], bool]:
    if component_class.__init__ is object.__init__:
        return (), False
    signature = inspect.signature(component_class.__init__)
    names: list[str] = []
    open_params = False
    for i, param in enumerate(signature.parameters.values()):
        if i == 0 and param.name == "self":
            continue
        if param.kind is inspect.Parameter.VAR_KEYWORD:
            open_params = True
        elif param.kind in (inspect.Parameter.POSITIONAL_OR_KEYWORD, inspect.Parameter.KEYWORD_ONLY):
            names.append(param.name)
    return tuple(names), open_params


class ComponentRegistry:
    """
    Registry for component discovery, validation and instantiation.

    Components register themselves using the @register_component decorator.
    """

    _components: dict[str, dict[str, ComponentMetadata]] = {cat: {} for cat in CATEGORIES}

    @classmethod
    def _check_category(cls, category: str):
        if category not in cls._components:
            raise ValueError(f"Invalid category: {category}")

    @classmethod
    def register(cls, category: str, metadata: ComponentMetadata):
        """Register a component after checking the category's member contract."""
        cls._check_category(category)
        missing = [m for m in CATEGORY_MEMBERS[category] if not hasattr(metadata.class_ref, m)]
        if missing:
            raise TypeError(
                f"{category} '{metadata.name}' is missing required members: {', '.join(missing)}"
            )
        cls._components[category][metadata.name] = metadata

    @classmethod
    def get_class(cls, name: str, category: str) -> type:
        """Get component class by name."""
        return cls.get_metadata(name, category).class_ref

    @classmethod
    def get_metadata(cls, name: str, category: str) -> ComponentMetadata:
        """Get component metadata."""
        cls._check_category(category)
        if name not in cls._components[category]:
            available = ', '.join(sorted(cls._components[category].keys()))
            raise ValueError(
                f"Unknown {category} '{name}'. Available: {available}"
            )
        return cls._components[category][name]

    @classmethod
    def list_components(cls, category: Optional[str] = None) -> dict:
        """List registered components."""
        if category:
            cls._check_category(category)
            return {category: sorted(cls._components[category].keys())}
        return {cat: sorted(items.keys()) for cat, items in cls._components.items()}

    @classmethod
    def create(cls, name: str, category: str, params: Optional[dict[str, Any]] = None,
               path: Optional[str] = None, **defaults):
        """
        Build a component from scenario parameters.

        ``defaults`` are engine-supplied keywords (e.g. ``theta_bound`` for
        plants) and are passed only to constructors that accept them;
        ``params`` come from the scenario and must all be accepted.

        Raises:
            ValueError: unknown component, unknown or rejected parameters, or
                an instance with non-positive sizes
        """
        meta = cls.get_metadata(name, category)
        path = path or category
        params = dict(params or {})

        if not meta.open_params:
            unknown = sorted(set(params) - set(meta.params))
            if unknown:
                accepted = ', '.join(meta.params) or '(none)'
                raise ValueError(
                    f"{path}.params: unknown parameter(s) {', '.join(unknown)} for {category} "
                    f"'{name}'. Accepted: {accepted}"
                )

        kwargs = {k: v for k, v in defaults.items() if meta.open_params or k in meta.params}
        kwargs.update(params)
        try:
            instance = meta.class_ref(**kwargs)
        except TypeError as e:
            raise ValueError(f"{path}.params: {e}") from e

        for size in CATEGORY_SIZES[category]:
            value = getattr(instance, size, None)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{category} '{name}' has invalid size {size}={value!r}")
        return instance


def register_component(
    category: str,
    name: str,
    description: Optional[str] = None,
    properties: Optional[list[str]] = None,
):
    """
    Decorator to register a component with the global registry.

    - Validates decorator name matches class `.name` if present
    - Falls back to first docstring line for description when omitted
    """

    def _first_line(doc: Optional[str]) -> str:
        return (doc or "").strip().split("\n")[0].strip() if doc else ""

    def decorator(component_class):
        class_name_attr = getattr(component_class, "name", None)
        if isinstance(class_name_attr, str) and class_name_attr != name:
            raise ValueError(
                f"Component registration name mismatch: decorator='{name}' vs class.name='{class_name_attr}'"
            )

        params, open_params = _constructor_params(component_class)
        metadata = ComponentMetadata(
            name=name,
            category=category,
            class_ref=component_class,
            description=description or _first_line(getattr(component_class, "__doc__", None)),
            properties=properties or [],
            params=params,
            open_params=open_params,
        )
        ComponentRegistry.register(category, metadata)
        return component_class

    return decorator


def list_all_components() -> dict[str, list[str]]:
    """List all registered component names by category."""
    return ComponentRegistry.list_components()
