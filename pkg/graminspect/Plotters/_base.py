"""
The base class for the Plotters (FigureClasses).
"""

import matplotlib.pyplot as plt
import seaborn as sns

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults

logger = aux.default_logger()


class Plotter(aux._ID):
    """
    A superclass that handles data linking and parameter setup for FigureClasses
    (not for end-user usage). All figures are static ``matplotlib`` figures.
    """

    __slots__ = ["_default_params", "_PARAMS", "_obj", "_data", "_fig"]

    def __init__(self, default_params: dict = None):
        super().__init__()
        self._id = self.__class__.__name__
        self._default_params = dict(default_params or {})
        self._PARAMS = dict(self._default_params)

        self._obj = None  # the data source object
        self._data = None  # the data to plot (df)
        self._fig = None

    def clear(self):
        """
        Clears the currently stored data and figure.
        """
        self._data = None
        self._obj = None
        self._fig = None

    def link(self, obj):
        """
        Links a data source (redefined by each FigureClass).
        """
        self._obj = obj

    def plot(self, **kwargs):
        """
        Generate Figure

        Parameters
        ----------
        **kwargs
            Any arbitrary keyword arguments to be passed to the plotting method

        Returns
        -------
        fig
            A matplotlib figure.
        """
        if self._data is None:
            e = aw.PlotterError("unknown_data", obj=self._obj)
            logger.error(e)
            raise e
        total_kwargs = self.update_params(kwargs)
        fig = self._static_plot(**total_kwargs)
        self._fig = fig
        return fig

    def get(self):
        """
        Returns the DataFrame used for plotting
        """
        return self._data

    def params(self, **params):
        """
        Set default parameters for plotting (will be forwarded to **kwargs).
        Returns the current parameters if no new ones are given.

        Parameters
        ----------
        **params
            Any keyword arguments to add to the pre-set plotting kwargs.
            In case of key duplications the OLD values are overwritten.
        """
        if params:
            self.update_params(params, store=True)
        return self._PARAMS

    def update_params(self, kwargs, supersede=True, store=False):
        """
        Appends pre-set parameters to kwargs.

        Parameters
        ----------
        kwargs : dict
            A dictionary of arbitrary keywords for plotting
        supersede : bool
            In case of key duplications: old values will be replaced with new ones (if supersede = True, default),
            or keep old ones (supersede = False).
        store : bool
            Store the merged dictionary as the new pre-set parameters.

        Returns
        -------
        params : dict
        """
        if supersede:
            kwargs = dict(self._PARAMS, **kwargs)
        else:
            kwargs = dict(kwargs, **self._PARAMS)
        if store:
            self._PARAMS = kwargs
        return kwargs

    def reset_params(self):
        """
        Reset to the pre-set default plotting parameters.
        """
        self._PARAMS = dict(self._default_params)

    def save(self, filename, **kwargs):
        """
        Saves the figure to a file using `savefig`.

        Parameters
        ----------
        filename : str
        **kwargs
            Any keyword arguments for `savefig`.
        """
        if self._fig is None:
            e = aw.PlotterError("no_fig_yet")
            logger.info(e)
        else:
            self._fig.savefig(filename, bbox_inches="tight", **kwargs)

    def _static_plot(self, **kwargs):
        raise NotImplementedError(f"{self.__class__.__name__} does not define _static_plot()")

    @staticmethod
    def _setup_axes(kwargs):
        """
        Pops `ax`, `figsize` and `style` and returns (fig, ax).
        """
        sns.set_style(kwargs.pop("style", defaults.default_style))
        ax = kwargs.pop("ax", None)
        figsize = kwargs.pop("figsize", None)
        if ax is None:
            fig, ax = plt.subplots(figsize=figsize)
        return ax.figure, ax

    @staticmethod
    def _axeslabels(kwargs):
        """
        Pops the kwargs: title, xlabel, ylabel.
        """
        return kwargs.pop("title", None), kwargs.pop("xlabel", None), kwargs.pop("ylabel", None)

    @staticmethod
    def _despine(ax):
        """
        Performs despining but makes remaining x and y axes a bit thicker...
        """
        ax.spines["right"].set_visible(False)
        ax.spines["top"].set_visible(False)
        ax.spines["left"].set_linewidth(1.05)
        ax.spines["bottom"].set_linewidth(1.05)
