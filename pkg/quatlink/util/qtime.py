import datetime

import dateutil.parser

from quatlink.util.qlogging import logger

QLTIME_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


def utcnow():
    return datetime.datetime.now(datetime.timezone.utc).replace(
        tzinfo=None, microsecond=0)


def utcparse(input):
    """
    Translate a string into a naive UTC datetime using dateutil.parser,
    so that it compares with what utcnow() returns.

    Also takes epoch timestamps and datetimes.
    """
    if isinstance(input, str):
        try:
            input = int(input)
        except ValueError:
            pass

    if isinstance(input, datetime.datetime):
        return input
    elif isinstance(input, str):
        t = dateutil.parser.parse(input)
        if t.utcoffset() is not None:
            t = t.replace(tzinfo=None) - t.utcoffset()
        return t
    elif isinstance(input, (int, float)):
        return datetime.datetime.fromtimestamp(
            input, datetime.timezone.utc).replace(tzinfo=None)
    else:
        logger.error("Unexpected type in utcparse [%s]" % type(input))
        return None


def datetime_to_string(dt):
    return datetime.datetime.strftime(dt, QLTIME_FORMAT)

