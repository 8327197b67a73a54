"""Link layer: MTU chunking, line framing, TCP link, multipart frames."""

from curiosim.transport.framing import (
    FRAMING_ERROR,
    MAX_LINE_BYTES,
    MTU,
    LineSplitter,
    chunk,
    reassemble,
    split_lines,
)
from curiosim.transport.link import (
    DeviceLinkServer,
    LinkClient,
    LinkClosed,
    LoopbackLink,
)
from curiosim.transport.mjpeg import (
    BOUNDARY,
    MultipartReader,
    decode_pgm,
    encode_part,
    encode_pgm,
    open_multipart_url,
    parse_multipart,
    stream_content_type,
)
from curiosim.transport.slot import FrameSlot

__all__ = [
    "BOUNDARY",
    "FRAMING_ERROR",
    "MAX_LINE_BYTES",
    "MTU",
    "DeviceLinkServer",
    "FrameSlot",
    "LineSplitter",
    "LinkClient",
    "LinkClosed",
    "LoopbackLink",
    "MultipartReader",
    "chunk",
    "decode_pgm",
    "encode_part",
    "encode_pgm",
    "open_multipart_url",
    "parse_multipart",
    "reassemble",
    "split_lines",
    "stream_content_type",
]
