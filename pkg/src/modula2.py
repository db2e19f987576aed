import re

from .ecst import IDENTIFIER, UniversalNodeKind
from .frontend import Frontend, LexError, Parser, Scanner

LOOP = UniversalNodeKind.LOOP_STATEMENT
CONDITION = UniversalNodeKind.CONDITION
BRANCH = UniversalNodeKind.BRANCH
BRANCH_STATEMENT = UniversalNodeKind.BRANCH_STATEMENT
FUNCTION_DECL = UniversalNodeKind.FUNCTION_DECL

KEYWORDS = frozenset("""
    ARRAY BEGIN BY CASE CONST DEFINITION DO ELSE ELSIF END EXIT EXPORT FOR FROM IF
    IMPLEMENTATION IMPORT LOOP MODULE OF POINTER PROCEDURE QUALIFIED RECORD REPEAT
    RETURN SET THEN TO TYPE UNTIL VAR WHILE WITH
""".split())

# logical and arithmetic words are operators, not keywords
WORD_OPERATORS = frozenset(["AND", "OR", "NOT", "DIV", "MOD", "IN"])

RELATIONS = ("=", "#", "<>", "<", "<=", ">", ">=", "IN")
ADD_OPERATORS = ("+", "-", "OR")
MUL_OPERATORS = ("*", "/", "DIV", "MOD", "AND", "&")

# tokens that may follow an empty statement
STATEMENT_FOLLOW = ("END", "ELSE", "ELSIF", "UNTIL", ";")

TOKEN_PATTERN = re.compile(r"""
    (?P<space>[ \t\r\n]+)
  | (?P<literal>[0-9][0-9A-F]*[HBC]\b
      | [0-9]+\.(?!\.)[0-9]*(?:E[+-]?[0-9]+)?
      | [0-9]+
      | "[^"\n]*"
      | '[^'\n]*')
  | (?P<unterminated>["'])
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<operator>:=|<=|>=|<>|\.\.|[-+*/=\#<>&~^])
  | (?P<punctuation>[;,.:()\[\]{}|])
""", re.VERBOSE)


class Modula2Scanner(Scanner):
    token_pattern = TOKEN_PATTERN
    keywords = KEYWORDS
    word_operators = WORD_OPERATORS

    def scan_comment(self, offset):
        source = self.source
        if not source.startswith("(*", offset):
            return None
        depth = 0
        index = offset
        while index < len(source):
            if source.startswith("(*", index):
                depth += 1
                index += 2
            elif source.startswith("*)", index):
                depth -= 1
                index += 2
                if depth == 0:
                    return index
            else:
                index += 1
        raise LexError("unterminated comment", self.span(offset, offset + 2))


class Modula2Parser(Parser):
    def parse_compilation_unit(self):
        self.accept("IMPLEMENTATION")
        self.expect("MODULE")
        name = self.expect_type(IDENTIFIER, "module name")
        self.expect(";")
        self.imports()
        self.block()
        self.closing_name(name.lexeme)
        self.expect(".")

    def closing_name(self, name):
        token = self.peek()
        if token is None or token.lexeme != name:
            raise self.error(f"expected closing name {name!r}")
        self.advance()

    def imports(self):
        while self.at("FROM", "IMPORT"):
            if self.accept("FROM"):
                self.expect_type(IDENTIFIER, "module name")
            self.expect("IMPORT")
            self.ident_list()
            self.expect(";")

    def ident_list(self):
        self.expect_type(IDENTIFIER, "identifier")
        while self.accept(","):
            self.expect_type(IDENTIFIER, "identifier")

    def qualident(self):
        self.expect_type(IDENTIFIER, "identifier")
        while self.at(".") and self.at_type(IDENTIFIER, k=1):
            self.advance()
            self.advance()

    def block(self):
        self.declarations()
        if self.accept("BEGIN"):
            self.statement_sequence()
        self.expect("END")

    # -- declarations

    def declarations(self):
        while True:
            if self.accept("CONST"):
                while self.at_type(IDENTIFIER):
                    self.advance()
                    self.expect("=")
                    self.expression()
                    self.expect(";")
            elif self.accept("TYPE"):
                while self.at_type(IDENTIFIER):
                    self.advance()
                    self.expect("=")
                    self.type()
                    self.expect(";")
            elif self.accept("VAR"):
                while self.at_type(IDENTIFIER):
                    self.ident_list()
                    self.expect(":")
                    self.type()
                    self.expect(";")
            elif self.at("PROCEDURE"):
                self.procedure_declaration()
                self.expect(";")
            else:
                return

    def type(self):
        if self.at("["):
            self.subrange()
        elif self.accept("("):
            self.ident_list()
            self.expect(")")
        elif self.accept("ARRAY"):
            self.simple_type()
            while self.accept(","):
                self.simple_type()
            self.expect("OF")
            self.type()
        elif self.accept("POINTER"):
            self.expect("TO")
            self.type()
        elif self.accept("SET"):
            self.expect("OF")
            self.simple_type()
        elif self.accept("RECORD"):
            self.field_list()
            while self.accept(";"):
                self.field_list()
            self.expect("END")
        else:
            self.simple_type()

    def simple_type(self):
        if self.at("["):
            self.subrange()
        elif self.accept("("):
            self.ident_list()
            self.expect(")")
        else:
            self.qualident()
            if self.at("["):
                self.subrange()

    def subrange(self):
        self.expect("[")
        self.expression()
        self.expect("..")
        self.expression()
        self.expect("]")

    def field_list(self):
        if self.at_type(IDENTIFIER):
            self.ident_list()
            self.expect(":")
            self.type()

    def procedure_declaration(self):
        with self.node(FUNCTION_DECL):
            self.expect("PROCEDURE")
            name = self.expect_type(IDENTIFIER, "procedure name")
            if self.at("("):
                self.formal_parameters()
            self.expect(";")
            self.block()
            self.closing_name(name.lexeme)

    def formal_parameters(self):
        self.expect("(")
        if not self.at(")"):
            self.parameter_section()
            while self.accept(";"):
                self.parameter_section()
        self.expect(")")
        if self.accept(":"):
            self.qualident()

    def parameter_section(self):
        self.accept("VAR")
        self.ident_list()
        self.expect(":")
        if self.accept("ARRAY"):
            self.expect("OF")
        self.qualident()

    # -- statements

    def statement_sequence(self):
        self.statement()
        while self.accept(";"):
            self.statement()

    def statement(self):
        if self.at_type(IDENTIFIER):
            self.assignment_or_call()
        elif self.at("IF"):
            self.if_statement()
        elif self.at("WHILE"):
            self.while_statement()
        elif self.at("REPEAT"):
            self.repeat_statement()
        elif self.at("FOR"):
            self.for_statement()
        elif self.accept("RETURN"):
            if not self.at(*STATEMENT_FOLLOW):
                self.expression()
        elif self.accept("EXIT"):
            pass
        elif not self.at(*STATEMENT_FOLLOW):
            raise self.error("expected statement")

    def assignment_or_call(self):
        self.designator()
        if self.accept(":="):
            self.expression()
        elif self.at("("):
            self.actual_parameters()

    def designator(self):
        self.qualident()
        while True:
            if self.accept("."):
                self.expect_type(IDENTIFIER, "field name")
            elif self.accept("["):
                self.expression_list()
                self.expect("]")
            elif not self.accept("^"):
                return

    def actual_parameters(self):
        self.expect("(")
        if not self.at(")"):
            self.expression_list()
        self.expect(")")

    def expression_list(self):
        self.expression()
        while self.accept(","):
            self.expression()

    def condition(self):
        with self.node(CONDITION):
            self.expression()

    def if_statement(self):
        with self.node(BRANCH_STATEMENT):
            with self.node(BRANCH):
                self.expect("IF")
                self.condition()
                self.expect("THEN")
                self.statement_sequence()
            while self.at("ELSIF"):
                with self.node(BRANCH):
                    self.expect("ELSIF")
                    self.condition()
                    self.expect("THEN")
                    self.statement_sequence()
            if self.at("ELSE"):
                with self.node(BRANCH):
                    self.expect("ELSE")
                    self.statement_sequence()
            self.expect("END")

    def while_statement(self):
        with self.node(LOOP):
            self.expect("WHILE")
            self.condition()
            self.expect("DO")
            self.statement_sequence()
            self.expect("END")

    def repeat_statement(self):
        with self.node(LOOP):
            self.expect("REPEAT")
            self.statement_sequence()
            self.expect("UNTIL")
            self.condition()

    def for_statement(self):
        with self.node(LOOP):
            self.expect("FOR")
            self.expect_type(IDENTIFIER, "control variable")
            self.expect(":=")
            self.expression()
            self.expect("TO")
            self.condition()
            if self.accept("BY"):
                self.expression()
            self.expect("DO")
            self.statement_sequence()
            self.expect("END")

    # -- expressions

    def expression(self):
        self.simple_expression()
        if self.accept(*RELATIONS):
            self.simple_expression()

    def simple_expression(self):
        self.accept("+", "-")
        self.term()
        while self.accept(*ADD_OPERATORS):
            self.term()

    def term(self):
        self.factor()
        while self.accept(*MUL_OPERATORS):
            self.factor()

    def factor(self):
        if self.at_type("literal"):
            self.advance()
        elif self.at_type(IDENTIFIER):
            self.designator()
            if self.at("("):
                self.actual_parameters()
        elif self.accept("("):
            self.expression()
            self.expect(")")
        elif self.accept("NOT", "~"):
            self.factor()
        elif self.accept("{"):
            if not self.at("}"):
                self.expression_list()
            self.expect("}")
        else:
            raise self.error("expected expression")


class Modula2Frontend(Frontend):
    language_id = "modula2"
    scanner_class = Modula2Scanner
    parser_class = Modula2Parser
