"""
问题定义文件的词法分析器

    # 注释
    xi1 = 1;
    k1 = half_inverse_x;
    singular = true;
"""

from enum import Enum
from typing import List, NamedTuple

from .spec import ProblemDefinitionError


class TokenType(Enum):
    IDENTIFIER = "IDENTIFIER"
    NUMBER = "NUMBER"
    TRUE = "TRUE"
    FALSE = "FALSE"
    EQUALS = "="
    SEMICOLON = ";"  # 仅英文分号
    EOF = "EOF"


class Token(NamedTuple):
    type: TokenType
    value: str
    line: int
    column: int


class ProblemLexer:
    """问题定义文件词法分析器"""

    KEYWORDS = {
        "TRUE": TokenType.TRUE,
        "FALSE": TokenType.FALSE,
    }

    def __init__(self, text: str):
        self.text = text
        self.position = 0
        self.line = 1
        self.column = 1
        self.tokens: List[Token] = []

    def tokenize(self) -> List[Token]:
        while self.position < len(self.text):
            self._skip_whitespace()
            if self.position >= len(self.text):
                break

            char = self.text[self.position]
            if char == "#":
                # 跳过注释到行尾
                while self.position < len(self.text) and self.text[self.position] != "\n":
                    self.position += 1
                    self.column += 1
                continue

            if char.isalpha() or char == "_":
                self._read_identifier_or_keyword()
            elif char.isdigit() or (char in "-+." and self._lookahead_is_number()):
                self._read_number()
            elif char == "=":
                self._add_single_char_token(TokenType.EQUALS, char)
            elif char == ";":
                self._add_single_char_token(TokenType.SEMICOLON, char)
            else:
                raise ProblemDefinitionError(f"未识别的字符 '{char}'", self.line, self.column)

        self.tokens.append(Token(TokenType.EOF, "", self.line, self.column))
        return self.tokens

    def _skip_whitespace(self):
        while self.position < len(self.text) and self.text[self.position].isspace():
            if self.text[self.position] == "\n":
                self.line += 1
                self.column = 1
            else:
                self.column += 1
            self.position += 1

    def _lookahead_is_number(self) -> bool:
        nxt = self.text[self.position + 1:self.position + 2]
        if nxt.isdigit():
            return True
        # "-.5"
        return nxt == "." and self.text[self.position + 2:self.position + 3].isdigit()

    def _read_identifier_or_keyword(self):
        start = self.position
        start_column = self.column
        while self.position < len(self.text) and (
            self.text[self.position].isalnum() or self.text[self.position] == "_"
        ):
            self.position += 1
            self.column += 1
        value = self.text[start:self.position]
        token_type = self.KEYWORDS.get(value.upper(), TokenType.IDENTIFIER)
        self.tokens.append(Token(token_type, value, self.line, start_column))

    def _read_number(self):
        """整数、小数与科学计数法，允许前导正负号"""
        start = self.position
        start_column = self.column
        if self.text[self.position] in "+-":
            self._step()
        self._read_digits()
        if self._peek() == ".":
            self._step()
            self._read_digits()
        if self._peek() in ("e", "E"):
            self._step()
            if self._peek() in ("+", "-"):
                self._step()
            if not self._peek().isdigit():
                raise ProblemDefinitionError("科学计数法缺少指数", self.line, self.column)
            self._read_digits()
        value = self.text[start:self.position]
        self.tokens.append(Token(TokenType.NUMBER, value, self.line, start_column))

    def _read_digits(self):
        while self._peek().isdigit():
            self._step()

    def _peek(self) -> str:
        return self.text[self.position:self.position + 1]

    def _step(self):
        self.position += 1
        self.column += 1

    def _add_single_char_token(self, token_type: TokenType, char: str):
        self.tokens.append(Token(token_type, char, self.line, self.column))
        self._step()
