import { GameApi } from './api';
import { ViewModel } from './model';
import { initialUiState, rerender } from './render';

const DEFAULT_SERVER = 'http://127.0.0.1:8000';

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const api = new GameApi(params.get('server') ?? DEFAULT_SERVER);
  const vm = new ViewModel(api);
  const ui = initialUiState();
  vm.onChange(() => rerender(vm, ui));

  const form = document.getElementById('new-game-form') as HTMLFormElement;
  form.addEventListener('submit', (ev) => {
    ev.preventDefault();
    void (async () => {
      const k = Number((document.getElementById('cfg-k') as HTMLInputElement).value);
      const mult = Number((document.getElementById('cfg-mult') as HTMLInputElement).value);
      const rounds = Number((document.getElementById('cfg-rounds') as HTMLInputElement).value);
      const maxlen = Number((document.getElementById('cfg-maxlen') as HTMLInputElement).value);
      const chains = await api.chains(k, maxlen);
      await vm.newGame(k, chains.lengths, mult, rounds);
    })();
  });
}

window.addEventListener('DOMContentLoaded', () => { void boot(); });
