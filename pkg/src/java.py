import re

from .ecst import IDENTIFIER, KEYWORD, UniversalNodeKind
from .frontend import Frontend, LexError, Parser, Scanner

LOOP = UniversalNodeKind.LOOP_STATEMENT
CONDITION = UniversalNodeKind.CONDITION
BRANCH = UniversalNodeKind.BRANCH
BRANCH_STATEMENT = UniversalNodeKind.BRANCH_STATEMENT
FUNCTION_DECL = UniversalNodeKind.FUNCTION_DECL

KEYWORDS = frozenset("""
    abstract assert boolean break byte case catch char class const continue default do double
    else enum extends final finally float for goto if implements import instanceof int interface
    long native new package private protected public return short static strictfp super switch
    synchronized this throw throws transient try void volatile while
""".split())

LITERAL_WORDS = frozenset(["true", "false", "null"])
PRIMITIVE_TYPES = ("boolean", "byte", "char", "short", "int", "long", "float", "double")
MODIFIERS = ("public", "protected", "private", "static", "final", "abstract", "native",
             "synchronized", "transient", "volatile", "strictfp")

ASSIGNMENT_OPERATORS = ("=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=")
BINARY_PRECEDENCE = {
    "||": 1, "&&": 2, "|": 3, "^": 4, "&": 5,
    "==": 6, "!=": 6,
    "<": 7, ">": 7, "<=": 7, ">=": 7, "instanceof": 7,
    "<<": 8, ">>": 8, ">>>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
}
PREFIX_OPERATORS = ("+", "-", "++", "--", "!", "~")

TOKEN_PATTERN = re.compile(r"""
    (?P<space>[ \t\r\n]+)
  | (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<literal>0[xX][0-9a-fA-F_]+[lL]?
      | [0-9][0-9_]*\.[0-9]*(?:[eE][+-]?[0-9]+)?[fFdD]?
      | \.[0-9]+(?:[eE][+-]?[0-9]+)?[fFdD]?
      | [0-9][0-9_]*(?:[eE][+-]?[0-9]+)?[lLfFdD]?
      | "(?:\\.|[^"\\\n])*"
      | '(?:\\.|[^'\\\n])+')
  | (?P<unterminated>["'])
  | (?P<word>[A-Za-z_$][A-Za-z0-9_$]*)
  | (?P<operator>>>>=|<<=|>>=|>>>|==|!=|<=|>=|&&|\|\||\+\+|--|\+=|-=|\*=|/=|%=|&=|\|=|\^=|<<|>>|->|::
      | [=<>!~?:+\-*/&|^%])
  | (?P<punctuation>[(){}\[\];,.@])
""", re.VERBOSE | re.DOTALL)


class JavaScanner(Scanner):
    token_pattern = TOKEN_PATTERN
    keywords = KEYWORDS
    word_literals = LITERAL_WORDS

    def scan_comment(self, offset):
        # well-formed comments are matched by the token pattern
        if self.source.startswith("/*", offset) and self.source.find("*/", offset + 2) < 0:
            raise LexError("unterminated comment", self.span(offset, offset + 2))
        return None


class JavaParser(Parser):
    def parse_compilation_unit(self):
        if self.accept("package"):
            self.qualified_name()
            self.expect(";")
        while self.accept("import"):
            self.accept("static")
            self.expect_type(IDENTIFIER, "package name")
            while self.accept("."):
                if not self.accept("*"):
                    self.expect_type(IDENTIFIER, "name")
            self.expect(";")
        while not self.at_end():
            if not self.accept(";"):
                self.class_declaration()

    def qualified_name(self):
        self.expect_type(IDENTIFIER, "name")
        while self.at(".") and self.at_type(IDENTIFIER, k=1):
            self.advance()
            self.advance()

    def modifiers(self):
        while self.accept(*MODIFIERS):
            pass

    def class_declaration(self):
        self.modifiers()
        self.expect("class")
        name = self.expect_type(IDENTIFIER, "class name")
        if self.accept("extends"):
            self.qualified_name()
        if self.accept("implements"):
            self.qualified_name()
            while self.accept(","):
                self.qualified_name()
        self.expect("{")
        while not self.at("}"):
            if self.at_end():
                raise self.error("expected '}'")
            self.member(name.lexeme)
        self.expect("}")

    def member(self, class_name):
        if self.accept(";"):
            return
        if self.member_is_method(class_name):
            self.method_declaration(class_name)
        else:
            self.modifiers()
            self.type()
            self.variable_declarators()
            self.expect(";")

    def member_is_method(self, class_name):
        k = 0
        while self.at(*MODIFIERS, k=k):
            k += 1
        token = self.peek(k)
        if token is not None and token.lexeme == class_name and self.at("(", k=k + 1):
            return True
        if self.at("void", k=k) or self.at(*PRIMITIVE_TYPES, k=k):
            k += 1
        elif self.at_type(IDENTIFIER, k=k):
            k += 1
            while self.at(".", k=k) and self.at_type(IDENTIFIER, k=k + 1):
                k += 2
        else:
            return False
        while self.at("[", k=k) and self.at("]", k=k + 1):
            k += 2
        return self.at_type(IDENTIFIER, k=k) and self.at("(", k=k + 1)

    def method_declaration(self, class_name):
        with self.node(FUNCTION_DECL):
            self.modifiers()
            token = self.peek()
            if not (token.lexeme == class_name and self.at("(", k=1)):
                if not self.accept("void"):
                    self.type()
            self.expect_type(IDENTIFIER, "method name")
            self.expect("(")
            if not self.at(")"):
                self.parameter()
                while self.accept(","):
                    self.parameter()
            self.expect(")")
            if self.accept("throws"):
                self.qualified_name()
                while self.accept(","):
                    self.qualified_name()
            if not self.accept(";"):
                self.block()

    def parameter(self):
        self.accept("final")
        self.type()
        self.expect_type(IDENTIFIER, "parameter name")
        self.dimensions()

    def type(self):
        if not self.accept(*PRIMITIVE_TYPES):
            self.qualified_name()
        self.dimensions()

    def dimensions(self):
        while self.at("[") and self.at("]", k=1):
            self.advance()
            self.advance()

    def variable_declarators(self):
        self.variable_declarator()
        while self.accept(","):
            self.variable_declarator()

    def variable_declarator(self):
        self.expect_type(IDENTIFIER, "variable name")
        self.dimensions()
        if self.accept("="):
            self.variable_initializer()

    def variable_initializer(self):
        if self.at("{"):
            self.array_initializer()
        else:
            self.expression()

    def array_initializer(self):
        self.expect("{")
        while not self.at("}"):
            self.variable_initializer()
            if not self.accept(","):
                break
        self.expect("}")

    # -- statements

    def block(self):
        self.expect("{")
        while not self.at("}"):
            if self.at_end():
                raise self.error("expected '}'")
            self.block_statement()
        self.expect("}")

    def block_statement(self):
        if self.looks_like_local_declaration():
            self.local_declaration()
            self.expect(";")
        else:
            self.statement()

    def looks_like_local_declaration(self):
        if self.at("final") or self.at(*PRIMITIVE_TYPES):
            return True
        if not self.at_type(IDENTIFIER):
            return False
        k = 1
        while self.at(".", k=k) and self.at_type(IDENTIFIER, k=k + 1):
            k += 2
        while self.at("[", k=k) and self.at("]", k=k + 1):
            k += 2
        return self.at_type(IDENTIFIER, k=k)

    def local_declaration(self):
        self.accept("final")
        self.type()
        self.variable_declarators()

    def statement(self):
        if self.at("{"):
            self.block()
        elif self.accept(";"):
            pass
        elif self.at("if"):
            self.if_statement()
        elif self.at("while"):
            self.while_statement()
        elif self.at("do"):
            self.do_statement()
        elif self.at("for"):
            self.for_statement()
        elif self.accept("return"):
            if not self.at(";"):
                self.expression()
            self.expect(";")
        elif self.accept("break", "continue"):
            if self.at_type(IDENTIFIER):
                self.advance()
            self.expect(";")
        elif self.accept("throw"):
            self.expression()
            self.expect(";")
        elif self.at_type(KEYWORD) and not self.at("this", "super", "new"):
            raise self.error("expected statement")
        else:
            self.expression()
            self.expect(";")

    def parenthesized_condition(self):
        self.expect("(")
        with self.node(CONDITION):
            self.expression()
        self.expect(")")

    def if_statement(self):
        with self.node(BRANCH_STATEMENT):
            with self.node(BRANCH):
                self.expect("if")
                self.parenthesized_condition()
                self.statement()
            while self.at("else"):
                with self.node(BRANCH):
                    self.expect("else")
                    if not self.accept("if"):
                        self.statement()
                        return
                    self.parenthesized_condition()
                    self.statement()

    def while_statement(self):
        with self.node(LOOP):
            self.expect("while")
            self.parenthesized_condition()
            self.statement()

    def do_statement(self):
        with self.node(LOOP):
            self.expect("do")
            self.statement()
            self.expect("while")
            self.parenthesized_condition()
            self.expect(";")

    def for_statement(self):
        with self.node(LOOP):
            self.expect("for")
            self.expect("(")
            if self.looks_like_local_declaration():
                self.accept("final")
                self.type()
                self.expect_type(IDENTIFIER, "variable name")
                self.dimensions()
                if self.accept(":"):
                    self.expression()
                    self.expect(")")
                    self.statement()
                    return
                if self.accept("="):
                    self.variable_initializer()
                while self.accept(","):
                    self.variable_declarator()
            elif not self.at(";"):
                self.expression_list()
            self.expect(";")
            if not self.at(";"):
                with self.node(CONDITION):
                    self.expression()
            self.expect(";")
            if not self.at(")"):
                self.expression_list()
            self.expect(")")
            self.statement()

    # -- expressions

    def expression_list(self):
        self.expression()
        while self.accept(","):
            self.expression()

    def expression(self):
        self.conditional()
        if self.accept(*ASSIGNMENT_OPERATORS):
            self.expression()

    def conditional(self):
        self.binary(1)
        if self.accept("?"):
            self.expression()
            self.expect(":")
            self.conditional()

    def binary(self, min_precedence):
        self.unary()
        while True:
            token = self.peek()
            if token is None or token.token_type not in ("operator", KEYWORD):
                return
            precedence = BINARY_PRECEDENCE.get(token.lexeme)
            if precedence is None or precedence < min_precedence:
                return
            self.advance()
            if token.lexeme == "instanceof":
                self.type()
            else:
                self.binary(precedence + 1)

    def unary(self):
        if self.accept(*PREFIX_OPERATORS):
            self.unary()
        elif self.at("(") and self.at(*PRIMITIVE_TYPES, k=1):
            self.advance()
            self.type()
            self.expect(")")
            self.unary()
        else:
            self.postfix()

    def postfix(self):
        self.primary()
        while True:
            if self.accept("."):
                self.expect_type(IDENTIFIER, "member name")
                if self.at("("):
                    self.arguments()
            elif self.accept("["):
                self.expression()
                self.expect("]")
            else:
                break
        while self.accept("++", "--"):
            pass

    def primary(self):
        if self.at_type("literal"):
            self.advance()
        elif self.accept("this", "super"):
            if self.at("("):
                self.arguments()
        elif self.at_type(IDENTIFIER):
            self.advance()
            if self.at("("):
                self.arguments()
        elif self.accept("("):
            self.expression()
            self.expect(")")
        elif self.accept("new"):
            self.creator()
        else:
            raise self.error("expected expression")

    def creator(self):
        if not self.accept(*PRIMITIVE_TYPES):
            self.qualified_name()
        if self.at("("):
            self.arguments()
            return
        if not self.at("["):
            raise self.error("expected '(' or '['")
        sized = False
        while self.at("["):
            if self.at("]", k=1):
                self.advance()
                self.advance()
            else:
                self.advance()
                self.expression()
                self.expect("]")
                sized = True
        if not sized:
            self.array_initializer()

    def arguments(self):
        self.expect("(")
        if not self.at(")"):
            self.expression_list()
        self.expect(")")


class JavaFrontend(Frontend):
    language_id = "javaoo"
    scanner_class = JavaScanner
    parser_class = JavaParser
