"""
Dependencies for FastAPI dependency injection.
"""
import logging
from typing import Any, Dict, List, Optional, Union

from .services import fixtures
from .services.kpipeline import CoeffAction, coefficient_action
from .services.words import Presentation, parse_presentation, presentation
from .utils import ValidationError

logger = logging.getLogger(__name__)

WARM_FIXTURES = ["braid3", "braid4", "remstillLCM", "ex-u-bj", "b4-coeff", "artin-rep-coeff"]


class FixtureRegistry:
    """Built-in presentations and coefficient actions, cached by name."""

    def __init__(self):
        self._presentations: Dict[str, Presentation] = {}
        self._coefficients: Dict[str, CoeffAction] = {}

    def presentation(self, name: str) -> Presentation:
        key = name.strip()
        if key not in self._presentations:
            self._presentations[key] = fixtures.presentation_fixture(key)
        return self._presentations[key]

    def coefficients(self, name: str) -> CoeffAction:
        key = name.strip()
        if key not in self._coefficients:
            self._coefficients[key] = coefficient_action(key)
        return self._coefficients[key]

    def load(self, name: str) -> Union[Presentation, CoeffAction]:
        key, _ = fixtures.parse_fixture_name(name)
        if key in fixtures.COEFFICIENT_FIXTURES:
            return self.coefficients(name)
        return self.presentation(name)

    def warm(self, names: Optional[List[str]] = None) -> int:
        names = WARM_FIXTURES if names is None else names
        for name in names:
            self.load(name)
        logger.info(f"Fixture registry warmed with {len(names)} entries")
        return len(names)

    @property
    def cached(self) -> List[str]:
        return sorted(self._presentations) + sorted(self._coefficients)


# Global registry
fixture_registry: Optional[FixtureRegistry] = None


def get_fixture_registry() -> FixtureRegistry:
    """Get the fixture registry, creating it on first use."""
    global fixture_registry
    if fixture_registry is None:
        fixture_registry = FixtureRegistry()
    return fixture_registry


def set_fixture_registry(registry: FixtureRegistry):
    """Set the fixture registry instance."""
    global fixture_registry
    fixture_registry = registry


def load_fixture(name: str) -> Union[Presentation, CoeffAction]:
    return get_fixture_registry().load(name)


def resolve_presentation(spec, degenerate_ok: bool = False) -> Presentation:
    """Presentation from a request's fixture name, text, or generators/relations."""
    if spec.fixture is not None:
        loaded = load_fixture(spec.fixture)
        if not isinstance(loaded, Presentation):
            raise ValidationError(f"{spec.fixture!r} is not a presentation fixture")
        return loaded
    if spec.text is not None:
        return parse_presentation(spec.text, degenerate_ok)
    return presentation(spec.generators or [], spec.relations or [], degenerate_ok)


def resolve_coefficients(coeff: Union[str, Dict[str, Any]]) -> CoeffAction:
    if isinstance(coeff, dict):
        return CoeffAction.from_dict(coeff)
    return get_fixture_registry().coefficients(coeff)
