"""
问题定义文件的语法分析：赋值语句序列 -> ProblemSpec
"""

from typing import Dict, List

from .lexer import ProblemLexer, Token, TokenType
from .registry import (
    FORCING,
    KERNELS,
    NONLINEARITIES,
    EXACT_SOLUTIONS,
    SINGULAR_KERNELS,
    closest_name,
    constant_forcing,
    constant_kernel,
)
from .spec import ProblemSpec, ProblemDefinitionError

# 键 -> 取值表；None 表示数值或布尔
FIELDS = {
    "xi1": None,
    "xi2": None,
    "g": FORCING,
    "k1": KERNELS,
    "k2": KERNELS,
    "phi1": NONLINEARITIES,
    "phi2": NONLINEARITIES,
    "exact": EXACT_SOLUTIONS,
    "singular": None,
}
REQUIRED = ("xi1", "xi2", "g")


class ProblemParser:
    """把 Token 流解析为 {键: 值Token}"""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.position = 0
        self.current_token = tokens[0] if tokens else None

    def parse(self) -> Dict[str, Token]:
        assignments: Dict[str, Token] = {}
        while self.current_token and self.current_token.type != TokenType.EOF:
            key = self._expect(TokenType.IDENTIFIER)
            name = key.value.lower()
            if name not in FIELDS:
                hint = closest_name(name, list(FIELDS))
                reason = f"未知的字段 '{key.value}'"
                if hint:
                    reason += f"，是否想写 '{hint}'"
                raise ProblemDefinitionError(reason, key.line, key.column)
            if name in assignments:
                raise ProblemDefinitionError(f"字段 '{name}' 重复赋值", key.line, key.column)
            self._expect(TokenType.EQUALS)
            value = self.current_token
            if value.type not in (TokenType.IDENTIFIER, TokenType.NUMBER,
                                  TokenType.TRUE, TokenType.FALSE):
                raise ProblemDefinitionError(
                    f"字段 '{name}' 缺少取值，实际为 {value.value or 'EOF'}", value.line, value.column
                )
            self._advance()
            self._expect(TokenType.SEMICOLON)
            assignments[name] = value
        return assignments

    def _advance(self):
        if self.position < len(self.tokens) - 1:
            self.position += 1
            self.current_token = self.tokens[self.position]

    def _expect(self, expected_type: TokenType) -> Token:
        token = self.current_token
        if not token or token.type != expected_type:
            line = token.line if token else None
            column = token.column if token else None
            actual = token.value if token and token.value else "EOF"
            raise ProblemDefinitionError(f"期望{expected_type.value}, 实际{actual}", line, column)
        self._advance()
        return token


def _number(token: Token, name: str) -> float:
    if token.type != TokenType.NUMBER:
        raise ProblemDefinitionError(f"字段 '{name}' 需要数值", token.line, token.column)
    return float(token.value)


def _select(token: Token, name: str):
    table = FIELDS[name]
    if token.type == TokenType.NUMBER and name in ("g", "k1", "k2"):
        value = float(token.value)
        return constant_forcing(value) if name == "g" else constant_kernel(value)
    if token.type != TokenType.IDENTIFIER:
        raise ProblemDefinitionError(f"字段 '{name}' 需要内置函数名", token.line, token.column)
    if token.value in table:
        return table[token.value]
    hint = closest_name(token.value, sorted(table))
    reason = f"字段 '{name}' 的取值 '{token.value}' 不是内置函数"
    if hint:
        reason += f"，是否想写 '{hint}'"
    raise ProblemDefinitionError(reason, token.line, token.column)


def parse_problem(text: str, name: str = "problem-file") -> ProblemSpec:
    assignments = ProblemParser(ProblemLexer(text).tokenize()).parse()
    for field in REQUIRED:
        if field not in assignments:
            raise ProblemDefinitionError(f"缺少必填字段 '{field}'")

    singular = False
    if "singular" in assignments:
        token = assignments["singular"]
        if token.type not in (TokenType.TRUE, TokenType.FALSE):
            raise ProblemDefinitionError("字段 'singular' 需要 true 或 false", token.line, token.column)
        singular = token.type == TokenType.TRUE
    elif "k1" in assignments and assignments["k1"].value in SINGULAR_KERNELS:
        singular = True

    functions = {
        field: _select(assignments[field], field)
        for field in ("g", "k1", "k2", "phi1", "phi2", "exact")
        if field in assignments
    }
    return ProblemSpec(
        xi1=_number(assignments["xi1"], "xi1"),
        xi2=_number(assignments["xi2"], "xi2"),
        g=functions["g"],
        k1=functions.get("k1"),
        k2=functions.get("k2"),
        phi1=functions.get("phi1"),
        phi2=functions.get("phi2"),
        exact=functions.get("exact"),
        name=name,
        singular_at_zero=singular,
    )


def load_problem(path: str) -> ProblemSpec:
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    return parse_problem(text, name=path)
