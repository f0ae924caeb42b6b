"""Exception hierarchy shared by every fragcodec module."""

from __future__ import annotations


class CodecError(ValueError):
    """Base class for all fragcodec errors."""


class SmilesError(CodecError):
    """A string could not be tokenized or parsed.

    ``position`` is the character offset of the offending symbol when known.
    """

    def __init__(self, message: str, position: int | None = None) -> None:
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnknownCharacter(SmilesError):
    def __init__(self, char: str, position: int) -> None:
        self.char = char
        super().__init__(f"unknown character {char!r}", position)


class MalformedBracketAtom(SmilesError):
    pass


class UnsupportedElement(MalformedBracketAtom):
    pass


class MalformedPercentClosure(SmilesError):
    pass


class SmilesSyntaxError(SmilesError):
    pass


class UnbalancedParenthesis(SmilesError):
    pass


class AromaticityError(SmilesError):
    pass


class UnmatchedRingClosure(SmilesError):
    def __init__(self, number: int, position: int | None = None) -> None:
        self.number = number
        super().__init__(f"ring closure {number} is never closed", position)


class BondOrderConflict(CodecError):
    """Two sides of a ring closure or attachment pair disagree on bond order."""

    def __init__(self, label: int | str) -> None:
        self.label = label
        super().__init__(f"conflicting bond orders on pair {label}")


class DuplicateBond(CodecError):
    pass


class NotCuttable(CodecError):
    def __init__(self, bond: tuple[int, int], reason: str) -> None:
        self.bond = bond
        super().__init__(f"bond {bond[0]}-{bond[1]} cannot be cut: {reason}")


class CyclicFragmentGraph(CodecError):
    pass


class UnpairedAttachment(CodecError):
    def __init__(self, attach_id: int | None, count: int) -> None:
        self.attach_id = attach_id
        self.count = count
        label = "*" if attach_id is None else f"[{attach_id}*]"
        super().__init__(f"attachment {label} occurs {count} time(s), expected 2")


class DisconnectedResult(CodecError):
    """Reassembly produced more than one connected component."""

    def __init__(self, components: int) -> None:
        self.components = components
        super().__init__(f"result has {components} disconnected components")


class FragmentParseError(CodecError):
    def __init__(self, index: int, cause: Exception) -> None:
        self.index = index
        self.cause = cause
        super().__init__(f"fragment {index}: {cause}")


class ClosureNumberExhausted(CodecError):
    pass


class EmptyCorpus(CodecError):
    pass


class EmptyGeneration(CodecError):
    pass


class BinningMismatch(CodecError):
    pass
