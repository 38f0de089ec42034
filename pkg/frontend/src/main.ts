import { GatewayClient } from './api.js';
import { ViewModel } from './model.js';
import { buildSkeleton, render } from './render.js';

function sessionId(): string {
  const key = 'nlui-session';
  let id = localStorage.getItem(key);
  if (id === null) {
    id = `web-${Math.random().toString(36).slice(2, 10)}`;
    localStorage.setItem(key, id);
  }
  return id;
}

function main(): void {
  const root = document.getElementById('app');
  if (root === null) throw new Error('missing #app mount point');

  const client = new GatewayClient(window.location.origin, sessionId());
  const vm = new ViewModel(client);
  const refs = buildSkeleton(root);

  vm.onChange((snap) => render(refs, snap));

  refs.form.addEventListener('submit', (event) => {
    event.preventDefault();
    const text = refs.promptInput.value;
    refs.promptInput.value = '';
    void vm.submit(text);
  });

  vm.init().catch((error) => {
    root.innerHTML = `<p class="banner">Could not reach the gateway: ${String(error)}</p>`;
  });
}

main();
