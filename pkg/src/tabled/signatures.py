"""Names, arities and printed signatures of the builtin operations.

Shared by the checker, the evaluator and the datasheet so the three never
disagree about what exists.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Signature:
    name: str
    text: str
    min_args: int
    max_args: int
    table_api: bool = True

    def accepts(self, n: int) -> bool:
        return self.min_args <= n <= self.max_args

    def arity_text(self) -> str:
        if self.min_args == self.max_args:
            return arguments(self.min_args)
        return f"{self.min_args} to {self.max_args} arguments"


def _sig(name, text, lo, hi=None, api=True):
    return Signature(name, text, lo, lo if hi is None else hi, api)


SIGNATURES: dict[str, Signature] = {
    s.name: s
    for s in [
        _sig("header", "header :: t:Table -> cs:Seq<ColName>", 1),
        _sig("nrows", "nrows :: t:Table -> n:Number", 1),
        _sig("ncols", "ncols :: t:Table -> n:Number", 1),
        _sig("getRow", "getRow :: t:Table * n:Number -> r:Row", 2),
        _sig("getValue", "getValue :: r:Row * c:ColName -> v:Value", 2),
        _sig("getColumn", "getColumn :: t:Table * c:ColName -> vs:Seq<Value>", 2),
        _sig("addColumn", "addColumn :: t1:Table * c:ColName * vs:Seq<Value> -> t2:Table", 3),
        _sig("buildColumn", "buildColumn :: t1:Table * c:ColName * f:(r:Row -> v:Value) -> t2:Table", 3),
        _sig("selectRows", "selectRows :: t1:Table * ns:Seq<Number> -> t2:Table (also bs:Seq<Boolean>)", 2),
        _sig("selectColumns", "selectColumns :: t1:Table * cs:Seq<ColName> -> t2:Table", 2),
        _sig("dropColumns", "dropColumns :: t1:Table * cs:Seq<ColName> -> t2:Table", 2),
        _sig("head", "head :: t1:Table * n:Number -> t2:Table", 2),
        _sig("tsort", "tsort :: t1:Table * c:ColName * ascending:Boolean -> t2:Table", 3),
        _sig(
            "orderBy",
            "orderBy :: t1:Table * [(getKey:(r:Row -> k:K), compare:(k1:K * k2:K -> Boolean))] -> t2:Table",
            2,
        ),
        _sig("vcat", "vcat :: t1:Table * t2:Table -> t3:Table", 2),
        _sig("hcat", "hcat :: t1:Table * t2:Table -> t3:Table", 2),
        _sig("leftJoin", "leftJoin :: t1:Table * t2:Table * c:ColName -> t3:Table", 3),
        _sig("pivotLonger", "pivotLonger :: t1:Table * cs:Seq<ColName> * namesTo:ColName * valuesTo:ColName -> t2:Table", 4),
        _sig("pivotWider", "pivotWider :: t1:Table * namesFrom:ColName * valuesFrom:ColName -> t2:Table", 3),
        _sig("groupByRetentive", "groupByRetentive :: t1:Table * c:ColName -> t2:Table", 2),
        _sig("groupBySubtractive", "groupBySubtractive :: t1:Table * c:ColName -> t2:Table", 2),
        _sig("sampleRows", "sampleRows :: t1:Table * n:Number [* seed:Number] -> t2:Table", 2, 3),
        _sig("dotProduct", "dotProduct :: t:Table * c1:ColName * c2:ColName -> n:Number", 3),
        _sig("fisherTest", "fisherTest :: a:Seq<Boolean> * b:Seq<Boolean> -> p:Number", 2),
        _sig("isMissing", "isMissing :: v:Value? -> b:Boolean", 1, api=False),
        _sig("withDefault", "withDefault :: v:Value? * d:Value -> v:Value", 2, api=False),
        _sig("nameAppend", "nameAppend :: a:ColName * b:ColName -> c:ColName", 2, api=False),
        _sig("nameSplit", "nameSplit :: c:ColName * sep:String -> parts:Seq<String>", 2, api=False),
        _sig("namePrefix", "namePrefix :: c:ColName * p:ColName -> b:Boolean", 2, api=False),
        _sig("length", "length :: s:Seq<Value> -> n:Number", 1, api=False),
        _sig("range", "range :: n:Number -> ns:Seq<Number>", 1, api=False),
    ]
}


def arguments(n: int) -> str:
    return f"{n} argument{'' if n == 1 else 's'}"
