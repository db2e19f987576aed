from dataclasses import dataclass

from .ecst import SourceSpan, COMMENT


@dataclass(frozen=True)
class Token:
    lexeme: str
    token_type: str  # keyword | identifier | literal | operator | punctuation | comment
    span: SourceSpan

    @property
    def is_comment(self):
        return self.token_type == COMMENT

    def __str__(self):
        return f"{self.lexeme!r} ({self.token_type}) at {self.span.start_line}:{self.span.start_column}"
