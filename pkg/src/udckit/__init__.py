"""Parsing and collection-profiling analytics for UDC notation strings."""

from .notation import (
    AuxKind,
    Auxiliary,
    Classification,
    Connector,
    ConnectorKind,
    GroupTerm,
    ParseError,
    SimpleTerm,
    Term,
    Token,
    TokenKind,
    UdcExpression,
    all_classes,
    classify,
    dump_tree,
    leading_class,
    main_class_of,
    parse,
    render,
    string_length,
    tokenize,
)

__version__ = "0.1.0"
