from ._cli import app

app(prog_name="untwist")
