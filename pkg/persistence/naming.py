"""
Entity naming helpers.

Institution names are Turkish and carry characters such as "İ", "ı", "ş" and
"ğ". Entity identity uses an ASCII slug so the same institution gets the same
key in CSV, JSON and cassette files. Short names reproduce the abbreviated
labels used in the top/bottom ten tables.

Example:
    >>> slugify("İstanbul Üniversitesi")
    'istanbul-universitesi'
    >>> short_name("Karamanoğlu Mehmetbey Üniversitesi")
    'K. Mehmetbey'
"""

import re
import unicodedata

# Characters NFKD does not decompose into an ASCII base letter.
_TURKISH_FOLD = str.maketrans({"ı": "i", "İ": "I", "ß": "ss", "æ": "ae", "ø": "o"})

_UNIVERSITY_SUFFIX = " Üniversitesi"

SHORT_NAMES: dict[str, str] = {
    "Karamanoğlu Mehmetbey Üniversitesi": "K. Mehmetbey",
    "Ağrı İbrahim Çeçen Üniversitesi": "Ağrı İ. Çeçen",
}


def slugify(name: str) -> str:
    """Fold a display name into a lowercase ASCII slug."""
    folded = unicodedata.normalize("NFKD", name.translate(_TURKISH_FOLD))
    ascii_only = folded.encode("ascii", "ignore").decode("ascii")
    slug = re.sub(r"[^a-z0-9]+", "-", ascii_only.lower()).strip("-")
    if not slug:
        raise ValueError(f"name {name!r} has no ASCII letters or digits to build a slug")
    return slug


def short_name(name: str) -> str:
    """Table label for an institution: explicit abbreviation or the name without its suffix."""
    if name in SHORT_NAMES:
        return SHORT_NAMES[name]
    if name.endswith(_UNIVERSITY_SUFFIX):
        return name[: -len(_UNIVERSITY_SUFFIX)]
    return name
