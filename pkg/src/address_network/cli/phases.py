from ..utils.errors import ConfigError

EXPLORATION = "Exploration"
ADAPTATION = "Adaptation"
MATURITY = "Maturity"

FIRST_YEAR = 2009


def phase_of_year(year: int) -> str:
    """
    Evolutionary phase of a calendar year.

    2012 (first halving) opens Adaptation and 2015 opens Maturity; the
    overlapping endpoints in the literature are resolved toward the later phase.
    """
    if year < FIRST_YEAR:
        raise ConfigError(f"year {year} predates the chain ({FIRST_YEAR})")
    if year <= 2011:
        return EXPLORATION
    if year <= 2014:
        return ADAPTATION
    return MATURITY
