"""Generator trampoline: deep tree recursion on an explicit stack.

Recursive algorithms are written as generators that ``yield`` their
subcalls and ``return`` their results; :func:`run` drives them with an
explicit stack, so depth is bounded by heap memory rather than the
interpreter recursion limit.
"""


def run(gen):
    """Drive a generator-based recursion to completion and return its value.

    Yielded values must themselves be generators (subcalls); a subcall's
    return value is sent back into its caller.
    """
    stack = [gen]
    result = None
    while stack:
        try:
            sub = stack[-1].send(result)
        except StopIteration as stop:
            stack.pop()
            result = stop.value
        else:
            stack.append(sub)
            result = None
    return result
