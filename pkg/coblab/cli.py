import typer

from .experiment.cli import build, init, report, rpk, verify
from .utils import set_verbose

app = typer.Typer(
    pretty_exceptions_enable=False,
    help="Measurable coboundaries, skew products on tori and their verification",
)


@app.callback()
def main_options(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable debug logging"),
):
    set_verbose(verbose)


app.command("build", help="Build chains and system spec")(build)
app.command("verify", help="Run verification probes")(verify)
app.command("rpk", help="Certify regional proximality")(rpk)
app.command("report", help="Render report.md")(report)
app.command("init", help="Write a sample configuration")(init)


def main():
    app()


if __name__ == "__main__":
    main()
