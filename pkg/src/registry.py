import logging
import os
from dataclasses import dataclass, field
from typing import List

from lxml import etree

from .frontend import FrontendIoError, RegistryError, UnknownExtensionError
from .java import JavaFrontend
from .modula2 import Modula2Frontend

logger = logging.getLogger(__name__)

# frontends are fixed at build time; the registry only maps extensions to them
FRONTENDS = {
    frontend.language_id: frontend for frontend in (Modula2Frontend(), JavaFrontend())
}

DEFAULT_REGISTRY = "languages.xml"


@dataclass(frozen=True)
class LanguageRegistryEntry:
    extension: str
    language_id: str
    display_name: str


@dataclass
class LanguageRegistry:
    entries: List[LanguageRegistryEntry] = field(default_factory=list)

    def __post_init__(self):
        self._by_extension = {}
        for entry in self.entries:
            key = entry.extension.lower()
            if key in self._by_extension:
                raise RegistryError(f"duplicate extension {entry.extension!r} in language registry")
            self._by_extension[key] = entry

    def lookup(self, extension):
        return self._by_extension.get(extension.lower().lstrip("."))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def load_registry(path):
    try:
        document = etree.parse(os.fspath(path))
    except OSError as e:
        raise FrontendIoError(f"cannot read language registry {path}: {e}") from e
    except etree.XMLSyntaxError as e:
        raise FrontendIoError(f"malformed language registry {path}: {e}") from e
    registry = registry_from_xml(document.getroot())
    logger.debug("loaded %d language registry entries from %s", len(registry), path)
    return registry


def registry_from_xml(root):
    if root.tag != "languages":
        raise RegistryError(f"registry root must be <languages>, found <{root.tag}> (line {root.sourceline})")
    entries = []
    for language in _elements(root):
        if language.tag != "language":
            raise RegistryError(f"unknown registry element <{language.tag}> (line {language.sourceline})")
        _warn_unknown_attributes(language, ("id", "name"))
        language_id = language.get("id")
        if not language_id:
            raise RegistryError(f"<language> without id (line {language.sourceline})")
        display_name = language.get("name", language_id)
        for ext in _elements(language):
            if ext.tag != "ext":
                raise RegistryError(f"unknown registry element <{ext.tag}> (line {ext.sourceline})")
            _warn_unknown_attributes(ext, ())
            extension = (ext.text or "").strip().lstrip(".")
            if not extension:
                raise RegistryError(f"empty <ext> for language {language_id!r} (line {ext.sourceline})")
            entries.append(LanguageRegistryEntry(extension, language_id, display_name))
    return LanguageRegistry(entries)


def _elements(parent):
    return (child for child in parent if isinstance(child.tag, str))


def _warn_unknown_attributes(element, known):
    for name in element.attrib:
        if name not in known:
            logger.warning("ignoring unknown attribute %r on <%s> (line %s)", name, element.tag, element.sourceline)


def detect_language(path, registry):
    _, extension = os.path.splitext(os.fspath(path))
    entry = registry.lookup(extension) if extension else None
    if entry is None:
        raise UnknownExtensionError(f"no language registered for extension {extension or '(none)'!r}")
    return entry.language_id


def frontend_for(language_id):
    try:
        return FRONTENDS[language_id]
    except KeyError:
        raise UnknownExtensionError(f"no frontend available for language {language_id!r}") from None


def lex(source, language_id):
    return frontend_for(language_id).lex(source)


def parse(tokens, language_id, source_path="", total_lines=None):
    return frontend_for(language_id).parse(tokens, source_path, total_lines)


def parse_file(path, registry):
    language_id = detect_language(path, registry)
    try:
        with open(path, encoding="utf-8") as f:
            source = f.read()
    except (OSError, UnicodeDecodeError) as e:
        raise FrontendIoError(f"cannot read {path}: {e}") from e
    return frontend_for(language_id).parse_source(source, os.fspath(path))
