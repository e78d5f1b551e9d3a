#!/usr/bin/env python

from hpdesign import cli


if __name__ == '__main__':
    cli.main()
